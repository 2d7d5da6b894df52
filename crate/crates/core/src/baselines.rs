//! Classical updating schemes the projection method is compared against.
//!
//! Both project onto `Z = blockdiag(U_k, I_s)` on the left and a right basis
//! `W = [V_k, Q]`: Zha-Simon takes `Q` from a QR factorization of the part of
//! `E^H` outside `range(V_k)`, the "SV" variant of Vecharynski and Saad
//! replaces it by `r` leading left singular directions computed with GKL.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::flops;
use crate::kernels::{jacobi_svd, mgs_qr, orthonormal_basis};
use crate::krylov::{gkl_bidiagonalize, LinearOperator, SparseView};
use crate::update::{Direction, RowView, TruncatedSvd, UpdateProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineChoice {
    ZhaSimon,
    /// GKL rank (and step count) for the update block.
    VecharynskiSv { r: usize },
}

/// A baseline result with FLOPs split like the complexity table: building
/// `W`, solving the projected problem, and rotating the factors.
#[derive(Debug, Clone)]
pub struct BaselineOutput {
    pub svd: TruncatedSvd,
    pub flops_build_w: u64,
    pub flops_solve: u64,
    pub flops_other: u64,
    /// Columns of the right basis beyond `V_k`.
    pub w_extra: usize,
}

pub fn zha_simon_rows(problem: &UpdateProblem<'_>) -> Result<TruncatedSvd> {
    require(problem, Direction::Rows)?;
    Ok(zha_simon(problem)?.svd)
}

pub fn zha_simon_cols(problem: &UpdateProblem<'_>) -> Result<TruncatedSvd> {
    require(problem, Direction::Columns)?;
    Ok(zha_simon(problem)?.svd)
}

pub fn vecharynski_rows(problem: &UpdateProblem<'_>, r: usize, seed: u64) -> Result<TruncatedSvd> {
    require(problem, Direction::Rows)?;
    Ok(vecharynski_sv(problem, r, seed)?.svd)
}

pub fn vecharynski_cols(problem: &UpdateProblem<'_>, r: usize, seed: u64) -> Result<TruncatedSvd> {
    require(problem, Direction::Columns)?;
    Ok(vecharynski_sv(problem, r, seed)?.svd)
}

pub fn run_baseline(problem: &UpdateProblem<'_>, choice: BaselineChoice, seed: u64) -> Result<BaselineOutput> {
    match choice {
        BaselineChoice::ZhaSimon => zha_simon(problem),
        BaselineChoice::VecharynskiSv { r } => vecharynski_sv(problem, r, seed),
    }
}

fn require(problem: &UpdateProblem<'_>, dir: Direction) -> Result<()> {
    if problem.direction != dir {
        return Err(Error::InvalidArgument(format!("expected a {dir:?} update")));
    }
    Ok(())
}

/// Zha-Simon in either direction, with FLOP phases.
pub fn zha_simon(problem: &UpdateProblem<'_>) -> Result<BaselineOutput> {
    let view = problem.row_view();
    let ((ev, q, r), flops_build_w) = flops::measure(|| {
        let ev = view.e.mul_dense(view.v);
        let et = view.e.to_dense().transpose();
        let etilde = et.sub(&view.v.matmul(&ev.transpose()));
        let qr = mgs_qr(&etilde);
        (ev, qr.q, qr.r)
    });
    let right_extra = r.transpose();
    let w_extra = q.ncols();
    finish(&view, problem.direction, &ev, &right_extra, &q, flops_build_w, w_extra)
}

/// The "SV" scheme: `r` GKL steps on `(I - V_k V_k^H) E^H`.
pub fn vecharynski_sv(problem: &UpdateProblem<'_>, r: usize, seed: u64) -> Result<BaselineOutput> {
    let view = problem.row_view();
    if r == 0 || r > view.s() {
        return Err(Error::InvalidArgument(format!("SV rank must lie in 1..={}, got {r}", view.s())));
    }
    let (built, flops_build_w) = flops::measure(|| -> Result<(DenseMatrix, DenseMatrix, DenseMatrix)> {
        let op = DeflatedUpdate { e: view.e, v: view.v };
        let steps = r.min(view.n()).min(view.s());
        let f = gkl_bidiagonalize(&op, steps, seed)?;
        let mut xr = f.ritz(r)?.u;
        for j in 0..xr.ncols() {
            op.project(xr.col_mut(j));
        }
        let x = orthonormal_basis(&xr, 1e-10);
        let ev = view.e.mul_dense(view.v);
        let ex = view.e.mul_dense(&x);
        Ok((ev, ex, x))
    });
    let (ev, ex, x) = built?;
    let w_extra = x.ncols();
    finish(&view, problem.direction, &ev, &ex, &x, flops_build_w, w_extra)
}

/// `(I - V V^H) E^H` as an `n x s` operator.
struct DeflatedUpdate<'a> {
    e: SparseView<'a>,
    v: &'a DenseMatrix,
}

impl DeflatedUpdate<'_> {
    fn project(&self, x: &mut [f64]) {
        if self.v.ncols() == 0 {
            return;
        }
        let c = self.v.t_matvec(x);
        let vc = self.v.matvec(&c);
        x.iter_mut().zip(&vc).for_each(|(a, b)| *a -= b);
    }
}

impl LinearOperator for DeflatedUpdate<'_> {
    fn nrows(&self) -> usize {
        self.e.ncols()
    }
    fn ncols(&self) -> usize {
        self.e.nrows()
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.e.apply_adjoint_into(x, y);
        self.project(y);
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        let mut py = y.to_vec();
        self.project(&mut py);
        self.e.apply_into(&py, x);
    }
    fn flops_per_apply(&self) -> u64 {
        self.e.flops_per_apply() + 4 * (self.v.nrows() * self.v.ncols()) as u64
    }
}

/// Solves the projected problem
///
/// ```text
///     [ Sigma_k   0     ]
///     [ E V_k     extra ]
/// ```
///
/// and rotates `blockdiag(U_k, I_s)` and `[V_k, q]` by its singular vectors.
fn finish(
    view: &RowView<'_>,
    direction: Direction,
    ev: &DenseMatrix,
    extra: &DenseMatrix,
    q: &DenseMatrix,
    flops_build_w: u64,
    w_extra: usize,
) -> Result<BaselineOutput> {
    let (k, s, p) = (view.k(), view.s(), extra.ncols());
    let (svd, flops_solve) = flops::measure(|| {
        let inner = DenseMatrix::from_fn(k + s, k + p, |i, j| match (i < k, j < k) {
            (true, true) if i == j => view.sigma[i],
            (true, _) => 0.0,
            (false, true) => ev[(i - k, j)],
            (false, false) => extra[(i - k, j - k)],
        });
        jacobi_svd(&inner)
    });
    let svd = svd?;
    let keep = k.min(svd.s.len());
    let (out, flops_other) = flops::measure(|| {
        let f = svd.u.columns(0..keep);
        let g = svd.v.columns(0..keep);
        let left = view.u.matmul(&f.rows(0..k)).vstack(&f.rows(k..k + s));
        let right = view.v.matmul(&g.rows(0..k)).add(&q.matmul(&g.rows(k..k + p)));
        (left, right)
    });
    let (left, right) = out;
    let s_vals = svd.s[..keep].to_vec();
    let svd = match direction {
        Direction::Rows => TruncatedSvd::new(left, s_vals, right)?,
        Direction::Columns => TruncatedSvd::new(right, s_vals, left)?,
    };
    Ok(BaselineOutput {
        svd,
        flops_build_w,
        flops_solve,
        flops_other,
        w_extra,
    })
}
