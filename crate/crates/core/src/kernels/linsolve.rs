use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::flops;

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
pub fn lu_solve(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::DimensionMismatch {
            op: "lu_solve",
            expected: n,
            got: if a.ncols() != n { a.ncols() } else { b.nrows() },
        });
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| lu[(i, k)].abs().partial_cmp(&lu[(j, k)].abs()).unwrap())
            .unwrap();
        if lu[(piv, k)].abs() <= f64::EPSILON * scale * n as f64 || lu[(piv, k)] == 0.0 {
            return Err(Error::InvalidArgument("lu_solve: matrix is numerically singular".into()));
        }
        if piv != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = t;
            }
            for j in 0..x.ncols() {
                let t = x[(k, j)];
                x[(k, j)] = x[(piv, j)];
                x[(piv, j)] = t;
            }
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            if f == 0.0 {
                continue;
            }
            lu[(i, k)] = f;
            for j in k + 1..n {
                lu[(i, j)] -= f * lu[(k, j)];
            }
            for j in 0..x.ncols() {
                x[(i, j)] -= f * x[(k, j)];
            }
        }
    }
    for j in 0..x.ncols() {
        for i in (0..n).rev() {
            let mut acc = x[(i, j)];
            for p in i + 1..n {
                acc -= lu[(i, p)] * x[(p, j)];
            }
            x[(i, j)] = acc / lu[(i, i)];
        }
    }
    flops::add_usize(2 * n * n * n / 3 + 2 * n * n * x.ncols());
    Ok(x)
}

pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    lu_solve(a, &DenseMatrix::identity(a.nrows()))
}

/// Lower Cholesky factor of a symmetric positive definite matrix. Fails with
/// `NotPositiveDefinite` carrying the offending pivot.
pub fn cholesky(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.nrows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for p in 0..j {
            d -= l[(j, p)] * l[(j, p)];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { curvature: d });
        }
        let dj = d.sqrt();
        l[(j, j)] = dj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for p in 0..j {
                s -= l[(i, p)] * l[(j, p)];
            }
            l[(i, j)] = s / dj;
        }
    }
    flops::add_usize(n * n * n / 3 + n);
    Ok(l)
}

/// Solves `L L^T X = B` given the Cholesky factor `L`.
pub fn cholesky_solve(l: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = l.nrows();
    let mut x = b.clone();
    for j in 0..x.ncols() {
        for i in 0..n {
            let mut acc = x[(i, j)];
            for p in 0..i {
                acc -= l[(i, p)] * x[(p, j)];
            }
            x[(i, j)] = acc / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut acc = x[(i, j)];
            for p in i + 1..n {
                acc -= l[(p, i)] * x[(p, j)];
            }
            x[(i, j)] = acc / l[(i, i)];
        }
    }
    flops::add_usize(2 * n * n * x.ncols());
    x
}
