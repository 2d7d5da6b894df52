use crate::dense::{norm2, DenseMatrix};
use crate::error::{Error, Result};
use crate::kernels::{cholesky, cholesky_solve, orthonormal_basis};
use crate::krylov::LinearOperator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgSettings {
    /// Per-column relative residual target.
    pub tol: f64,
    pub max_iter: usize,
    /// Keep the worst residual and the iterate after every step.
    pub record_history: bool,
}

impl Default for CgSettings {
    fn default() -> Self {
        CgSettings {
            tol: 1e-8,
            max_iter: 1000,
            record_history: false,
        }
    }
}

impl CgSettings {
    pub fn new(tol: f64, max_iter: usize) -> Result<Self> {
        let s = CgSettings {
            tol,
            max_iter,
            record_history: false,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidArgument(format!("CG tolerance must lie in (0, 1), got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("CG needs max_iter >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct CgHistory {
    /// Largest relative residual over the columns, after each iteration.
    pub max_residuals: Vec<f64>,
    pub iterates: Vec<DenseMatrix>,
}

#[derive(Debug, Clone)]
pub struct CgOutput {
    pub x: DenseMatrix,
    pub iterations: usize,
    /// Final relative residual per column.
    pub residuals: Vec<f64>,
    pub history: Option<CgHistory>,
}

/// `K = P (lambda I - B B^H) P` with `P = I - U U^H`: the negated, deflated
/// shifted operator. Symmetric, and positive definite on `range(P)` whenever
/// `lambda` exceeds the squared singular values of `P B`.
pub struct DeflatedShifted<'a, O: ?Sized> {
    b: &'a O,
    u: &'a DenseMatrix,
    lambda: f64,
}

impl<'a, O: LinearOperator + ?Sized> DeflatedShifted<'a, O> {
    pub fn new(b: &'a O, u: &'a DenseMatrix, lambda: f64) -> Result<Self> {
        if u.nrows() != b.nrows() {
            return Err(Error::DimensionMismatch {
                op: "deflated operator",
                expected: b.nrows(),
                got: u.nrows(),
            });
        }
        Ok(DeflatedShifted { b, u, lambda })
    }

    /// `x <- (I - U U^H) x`.
    pub fn project(&self, x: &mut [f64]) {
        if self.u.ncols() == 0 {
            return;
        }
        let c = self.u.t_matvec(x);
        let uc = self.u.matvec(&c);
        x.iter_mut().zip(&uc).for_each(|(a, b)| *a -= b);
    }

    pub fn project_block(&self, x: &mut DenseMatrix) {
        for j in 0..x.ncols() {
            self.project(x.col_mut(j));
        }
    }
}

impl<O: LinearOperator + ?Sized> LinearOperator for DeflatedShifted<'_, O> {
    fn nrows(&self) -> usize {
        self.b.nrows()
    }
    fn ncols(&self) -> usize {
        self.b.nrows()
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let mut px = x.to_vec();
        self.project(&mut px);
        let mut t = vec![0.0; self.b.ncols()];
        self.b.apply_adjoint_into(&px, &mut t);
        self.b.apply_into(&t, y);
        y.iter_mut().zip(&px).for_each(|(yi, &pi)| *yi = self.lambda * pi - *yi);
        self.project(y);
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        self.apply_into(y, x)
    }
    fn flops_per_apply(&self) -> u64 {
        let m = self.b.nrows() as u64;
        2 * self.b.flops_per_apply() + 8 * m * self.u.ncols() as u64 + 2 * m
    }
}

/// Columns whose orthogonalized norm falls below this fraction of the largest
/// are dropped from the search block.
const DROP_RTOL: f64 = 1e-12;

/// Solves `P (lambda I - B B^H) P X = P rhs` by breakdown-free block CG.
///
/// The search block is re-orthonormalized every step, with dependent
/// directions dropped, so the method survives columns that converge at
/// different rates. The deflation projector is applied to each operator
/// output and each new search block.
pub fn deflated_block_cg<O: LinearOperator + ?Sized>(
    b: &O,
    u_k: &DenseMatrix,
    lambda: f64,
    rhs: &DenseMatrix,
    settings: &CgSettings,
) -> Result<CgOutput> {
    settings.validate()?;
    let op = DeflatedShifted::new(b, u_k, lambda)?;
    let m = op.nrows();
    if rhs.nrows() != m {
        return Err(Error::DimensionMismatch {
            op: "deflated_block_cg rhs",
            expected: m,
            got: rhs.nrows(),
        });
    }
    let cols = rhs.ncols();
    let mut r = rhs.clone();
    op.project_block(&mut r);
    let targets: Vec<f64> = (0..cols).map(|j| norm2(r.col(j))).collect();
    let mut x = DenseMatrix::zeros(m, cols);
    let mut history = settings.record_history.then(CgHistory::default);

    let rel = |r: &DenseMatrix| -> Vec<f64> {
        (0..cols)
            .map(|j| if targets[j] > 0.0 { norm2(r.col(j)) / targets[j] } else { 0.0 })
            .collect()
    };
    let mut residuals = rel(&r);
    let done = |res: &[f64]| res.iter().all(|&v| v <= settings.tol);
    if done(&residuals) {
        return Ok(CgOutput {
            x,
            iterations: 0,
            residuals,
            history,
        });
    }

    let mut p = orthonormal_basis(&r, DROP_RTOL);
    for it in 1..=settings.max_iter {
        let q = op.apply_block(&p);
        let ptq = symmetrize(&p.t_matmul(&q));
        let l = cholesky(&ptq)?;
        let alpha = cholesky_solve(&l, &p.t_matmul(&r));
        x = x.add(&p.matmul(&alpha));
        r = r.sub(&q.matmul(&alpha));
        residuals = rel(&r);
        if let Some(h) = history.as_mut() {
            h.max_residuals.push(residuals.iter().cloned().fold(0.0, f64::max));
            h.iterates.push(x.clone());
        }
        if done(&residuals) {
            return Ok(CgOutput {
                x,
                iterations: it,
                residuals,
                history,
            });
        }
        let beta = cholesky_solve(&l, &q.t_matmul(&r)).scaled(-1.0);
        let mut dir = r.add(&p.matmul(&beta));
        op.project_block(&mut dir);
        p = orthonormal_basis(&dir, DROP_RTOL);
        if p.ncols() == 0 {
            break;
        }
    }
    Err(Error::CgNotConverged {
        iterations: settings.max_iter,
        residuals,
    })
}

fn symmetrize(a: &DenseMatrix) -> DenseMatrix {
    let n = a.nrows();
    DenseMatrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::SparseMatrix;

    #[test]
    fn zero_operator_is_one_step() {
        let b = SparseMatrix::zeros(4, 3);
        let u = DenseMatrix::zeros(4, 0);
        let rhs = DenseMatrix::from_fn(4, 2, |i, j| (i + 2 * j) as f64 - 1.5);
        let out = deflated_block_cg(&b, &u, 1.0, &rhs, &CgSettings::default()).unwrap();
        assert_eq!(out.iterations, 1);
        assert!(out.x.sub(&rhs).max_abs() < 1e-14);
    }

    #[test]
    fn zero_rhs_takes_no_steps() {
        let b = SparseMatrix::identity(3);
        let u = DenseMatrix::zeros(3, 0);
        let out = deflated_block_cg(&b, &u, 2.0, &DenseMatrix::zeros(3, 2), &CgSettings::default()).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.x.max_abs(), 0.0);
    }

    #[test]
    fn shift_below_spectrum_is_reported() {
        let b = SparseMatrix::from_coo(&[(0, 0, 3.0), (1, 1, 1.0)], 2, 2).unwrap();
        let u = DenseMatrix::zeros(2, 0);
        let rhs = DenseMatrix::from_rows(&[vec![1.0], vec![0.0]]);
        let err = deflated_block_cg(&b, &u, 4.0, &rhs, &CgSettings::default()).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { .. }));
    }

    #[test]
    fn settings_are_validated() {
        assert!(CgSettings::new(0.0, 10).is_err());
        assert!(CgSettings::new(1e-6, 0).is_err());
        assert!(CgSettings::new(1e-6, 5).is_ok());
    }
}
