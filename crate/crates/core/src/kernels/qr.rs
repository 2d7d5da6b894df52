use rand_distr::{Distribution, StandardNormal};

use crate::dense::{axpy, dot, norm2, scale, DenseMatrix};
use crate::rng;

/// Thin QR factors: `q` is `m x p` with orthonormal columns, `r` is
/// `p x n` upper trapezoidal, `p = min(m, n)`.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
}

/// Relative size below which an orthogonalized column counts as dependent.
const DEPENDENCE_RTOL: f64 = 1e-12;

/// Modified Gram-Schmidt with one full reorthogonalization pass.
///
/// A column that is (numerically) in the span of the previous ones gets a
/// zero on the diagonal of `r`, and its slot in `q` is filled by a random unit
/// vector orthogonalized against the columns already produced, so `q` always
/// has orthonormal columns.
pub fn mgs_qr(a: &DenseMatrix) -> QrFactors {
    let (m, n) = a.shape();
    let p = m.min(n);
    let mut q = DenseMatrix::zeros(m, p);
    let mut r = DenseMatrix::zeros(p, n);
    let mut filled = 0;

    for j in 0..n {
        let mut v = a.col(j).to_vec();
        let original = norm2(&v);
        for _pass in 0..2 {
            for i in 0..filled {
                let c = dot(q.col(i), &v);
                r[(i, j)] += c;
                axpy(-c, q.col(i), &mut v);
            }
        }
        if filled == p {
            continue;
        }
        let nv = norm2(&v);
        if original > 0.0 && nv > DEPENDENCE_RTOL * original {
            scale(1.0 / nv, &mut v);
            r[(filled, j)] = nv;
            q.set_col(filled, &v);
        } else {
            let fresh = random_orthogonal_unit(&q, filled, j as u64);
            q.set_col(filled, &fresh);
        }
        filled += 1;
    }
    QrFactors { q, r }
}

/// A unit vector orthogonal to the first `ncols` columns of `q`, drawn from a
/// stream keyed by `salt`. Requires `ncols < q.nrows()`.
pub(crate) fn random_orthogonal_unit(q: &DenseMatrix, ncols: usize, salt: u64) -> Vec<f64> {
    let m = q.nrows();
    assert!(ncols < m, "no room for another orthonormal column");
    let mut rng = rng::seeded(salt, rng::STREAM_QR);
    loop {
        let mut v: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
        let before = crate::dense::orthogonalize_against(q, ncols, &mut v);
        let after = norm2(&v);
        if after > 0.5 * before && after > 0.0 {
            scale(1.0 / after, &mut v);
            return v;
        }
    }
}

/// Orthonormal basis of the column span of `a`, dropping numerically dependent
/// columns (relative tolerance `rtol` against the largest column norm).
pub fn orthonormal_basis(a: &DenseMatrix, rtol: f64) -> DenseMatrix {
    let m = a.nrows();
    let scale_ref = (0..a.ncols()).map(|j| norm2(a.col(j))).fold(0.0, f64::max);
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut q = DenseMatrix::zeros(m, a.ncols().min(m));
    for j in 0..a.ncols() {
        if cols.len() == q.ncols() {
            break;
        }
        let mut v = a.col(j).to_vec();
        crate::dense::orthogonalize_against(&q, cols.len(), &mut v);
        let nv = norm2(&v);
        if scale_ref > 0.0 && nv > rtol * scale_ref {
            scale(1.0 / nv, &mut v);
            q.set_col(cols.len(), &v);
            cols.push(v);
        }
    }
    DenseMatrix::from_columns(m, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_its_own_factorization() {
        let f = mgs_qr(&DenseMatrix::identity(4));
        assert_eq!(f.q, DenseMatrix::identity(4));
        assert_eq!(f.r, DenseMatrix::identity(4));
    }

    #[test]
    fn single_column_normalization() {
        let f = mgs_qr(&DenseMatrix::from_rows(&[vec![3.0], vec![4.0]]));
        assert!((f.q[(0, 0)] - 0.6).abs() < 1e-15);
        assert!((f.q[(1, 0)] - 0.8).abs() < 1e-15);
        assert!((f.r[(0, 0)] - 5.0).abs() < 1e-15);
    }

    #[test]
    fn dependent_column_gets_zero_diagonal_and_orthonormal_q() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0, 0.0], vec![1.0, 2.0, 1.0], vec![0.0, 0.0, 1.0]]);
        let f = mgs_qr(&a);
        assert_eq!(f.r[(1, 1)], 0.0);
        assert!(f.q.orthonormality_error() < 1e-12);
        assert!(f.q.matmul(&f.r).sub(&a).frobenius_norm() < 1e-12);
    }

    #[test]
    fn wide_input_is_trapezoidal() {
        let a = DenseMatrix::from_fn(2, 4, |i, j| (1 + i * 4 + j) as f64);
        let f = mgs_qr(&a);
        assert_eq!(f.q.shape(), (2, 2));
        assert_eq!(f.r.shape(), (2, 4));
        assert!(f.q.matmul(&f.r).sub(&a).frobenius_norm() < 1e-12);
    }

    #[test]
    fn orthonormal_basis_drops_dependent_columns() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 3.0]]);
        let q = orthonormal_basis(&a, 1e-12);
        assert_eq!(q.ncols(), 2);
        assert!(q.orthonormality_error() < 1e-14);
    }
}
