use std::cell::RefCell;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::kernels::{jacobi_svd, orthonormal_basis};
use crate::krylov::cg::{deflated_block_cg, CgSettings, DeflatedShifted};
use crate::krylov::gkl::gkl_bidiagonalize;
use crate::krylov::LinearOperator;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XLambdaMode {
    /// Range finder on `M M^H R` with a Gaussian `R`.
    RandomizedSvd,
    /// A few GKL steps on `M` itself.
    GklOnProduct,
}

#[derive(Debug, Clone, Copy)]
pub struct XLambdaSettings {
    pub r: usize,
    pub sketch_cols: usize,
    pub mode: XLambdaMode,
    pub seed: u64,
    pub cg: CgSettings,
}

impl XLambdaSettings {
    /// Randomized mode with `sketch_cols = 2k`.
    pub fn new(r: usize, k: usize, seed: u64) -> Self {
        XLambdaSettings {
            r,
            sketch_cols: (2 * k).max(r),
            mode: XLambdaMode::RandomizedSvd,
            seed,
            cg: CgSettings::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct XLambda {
    /// `m x achieved_rank`, orthonormal and orthogonal to `U_k`.
    pub basis: DenseMatrix,
    pub requested_rank: usize,
    pub achieved_rank: usize,
    /// Approximate leading singular values of `M`.
    pub singular_values: Vec<f64>,
    pub cg_iterations: usize,
}

impl XLambda {
    pub fn rank_deficient(&self) -> bool {
        self.achieved_rank < self.requested_rank
    }
}

/// Singular values of `M` below this fraction of `||B||_F ||E||_F / lambda`
/// are treated as zero.
const RANK_RTOL: f64 = 1e-8;
/// Noise floor relative to the largest singular value, in units of CG tolerance.
const CG_NOISE_FACTOR: f64 = 100.0;

/// `M = -B(lambda) B E^H = K^+ P B E^H` where `K` is the deflated shifted
/// operator. Each application costs one CG solve; failures are kept and
/// surfaced by the caller, since the operator trait is infallible.
struct ResolventProduct<'a, O: ?Sized, F: ?Sized> {
    b: &'a O,
    e: &'a F,
    k_op: DeflatedShifted<'a, O>,
    u_k: &'a DenseMatrix,
    lambda: f64,
    cg: CgSettings,
    iterations: RefCell<usize>,
    failure: RefCell<Option<Error>>,
}

impl<'a, O: LinearOperator + ?Sized, F: LinearOperator + ?Sized> ResolventProduct<'a, O, F> {
    fn solve(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        let out = deflated_block_cg(self.b, self.u_k, self.lambda, rhs, &self.cg)?;
        *self.iterations.borrow_mut() += out.iterations;
        Ok(out.x)
    }

    /// `M Y` for an `s`-column block `Y`.
    fn apply_m(&self, y: &DenseMatrix) -> Result<DenseMatrix> {
        let ety = self.e.apply_adjoint_block(y);
        let mut bt = self.b.apply_block(&ety);
        self.k_op.project_block(&mut bt);
        self.solve(&bt)
    }

    /// `M^H Z` for an `m`-column block `Z`.
    fn apply_mt(&self, z: &DenseMatrix) -> Result<DenseMatrix> {
        let mut pz = z.clone();
        self.k_op.project_block(&mut pz);
        let w = self.solve(&pz)?;
        let btw = self.b.apply_adjoint_block(&w);
        Ok(self.e.apply_block(&btw))
    }

    fn record(&self, r: Result<DenseMatrix>, rows: usize) -> DenseMatrix {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                DenseMatrix::zeros(rows, 1)
            }
        }
    }
}

impl<O: LinearOperator + ?Sized, F: LinearOperator + ?Sized> LinearOperator for ResolventProduct<'_, O, F> {
    fn nrows(&self) -> usize {
        self.b.nrows()
    }
    fn ncols(&self) -> usize {
        self.e.nrows()
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let out = self.apply_m(&DenseMatrix::from_col_major(x.len(), 1, x.to_vec()));
        y.copy_from_slice(self.record(out, y.len()).col(0));
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        let out = self.apply_mt(&DenseMatrix::from_col_major(y.len(), 1, y.to_vec()));
        x.copy_from_slice(self.record(out, x.len()).col(0));
    }
    fn flops_per_apply(&self) -> u64 {
        self.e.flops_per_apply() + self.b.flops_per_apply()
    }
}

/// Orthonormal basis `X_{lambda,r}` of the `r` leading left singular
/// directions of `-B(lambda) B E^H`, with
/// `B(lambda) = (I - U_k U_k^H)(B B^H - lambda I)^{-1}`.
///
/// `b` is `m x n`, `e` is `s x n` (the rows being appended), `u_k` holds the
/// `k` known left singular vectors of `b`. Every resolvent application is a
/// deflated block CG solve, so `lambda` must exceed `sigma_1(b)^2`.
///
/// Fewer than `r` numerically nonzero directions is not an error: the result
/// carries the achieved rank.
pub fn build_x_lambda_r<O, F>(b: &O, u_k: &DenseMatrix, e: &F, lambda: f64, settings: &XLambdaSettings) -> Result<XLambda>
where
    O: LinearOperator + ?Sized,
    F: LinearOperator + ?Sized,
{
    let (m, n) = (b.nrows(), b.ncols());
    if e.ncols() != n {
        return Err(Error::DimensionMismatch {
            op: "build_x_lambda_r update",
            expected: n,
            got: e.ncols(),
        });
    }
    if settings.r > settings.sketch_cols {
        return Err(Error::InvalidArgument(format!(
            "rank {} exceeds sketch width {}",
            settings.r, settings.sketch_cols
        )));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("shift must be positive, got {lambda}")));
    }
    settings.cg.validate()?;
    let s = e.nrows();
    let prod = ResolventProduct {
        b,
        e,
        k_op: DeflatedShifted::new(b, u_k, lambda)?,
        u_k,
        lambda,
        cg: settings.cg,
        iterations: RefCell::new(0),
        failure: RefCell::new(None),
    };
    let scale_m = frobenius_estimate(b, settings.seed) * frobenius_estimate(e, settings.seed ^ 1) / lambda;
    let empty = |prod: &ResolventProduct<O, F>| XLambda {
        basis: DenseMatrix::zeros(m, 0),
        requested_rank: settings.r,
        achieved_rank: 0,
        singular_values: Vec::new(),
        cg_iterations: *prod.iterations.borrow(),
    };
    if settings.r == 0 || scale_m == 0.0 || s == 0 || m == 0 {
        return Ok(empty(&prod));
    }
    let floor = RANK_RTOL * scale_m;

    let (candidates, sigma) = match settings.mode {
        XLambdaMode::RandomizedSvd => {
            let mut rng = rng::seeded(settings.seed, rng::STREAM_SKETCH);
            let sketch = rng::gaussian_matrix(&mut rng, m, settings.sketch_cols);
            let mut y = prod.apply_m(&prod.apply_mt(&sketch)?)?;
            prod.k_op.project_block(&mut y);
            let q = orthonormal_basis(&y, 1e-14);
            if q.ncols() == 0 {
                return Ok(empty(&prod));
            }
            // Rayleigh-Ritz compression: SVD of Q^H M.
            let qtm = prod.apply_mt(&q)?.transpose();
            let svd = jacobi_svd(&qtm)?;
            let c = svd.s.len();
            (q.matmul(&svd.u.columns(0..c)), svd.s)
        }
        XLambdaMode::GklOnProduct => {
            let limit = m.min(s);
            let steps = (2 * settings.r).max(settings.r + 10).min(limit);
            let f = gkl_bidiagonalize(&prod, steps, settings.seed)?;
            if let Some(err) = prod.failure.borrow_mut().take() {
                return Err(err);
            }
            let t = f.ritz(settings.r)?;
            (t.u, t.s)
        }
    };

    let top = sigma.first().copied().unwrap_or(0.0);
    let thresh = floor.max(CG_NOISE_FACTOR * settings.cg.tol * top);
    let keep = sigma.iter().take(settings.r).take_while(|&&v| v > thresh).count();
    let mut x = candidates.columns(0..keep);
    prod.k_op.project_block(&mut x);
    let basis = orthonormal_basis(&x, 1e-8);
    let achieved = basis.ncols();
    let cg_iterations = prod.iterations.take();
    Ok(XLambda {
        basis,
        requested_rank: settings.r,
        achieved_rank: achieved,
        singular_values: sigma[..achieved].to_vec(),
        cg_iterations,
    })
}

/// Frobenius norm estimated by Gaussian probing; only used to set a scale.
fn frobenius_estimate<O: LinearOperator + ?Sized>(op: &O, seed: u64) -> f64 {
    let mut rng = rng::seeded(seed, rng::STREAM_SIGMA);
    let probes = 4;
    let mut acc = 0.0;
    for _ in 0..probes {
        let g = rng::gaussian_vec(&mut rng, op.ncols());
        acc += op.apply(&g).iter().map(|v| v * v).sum::<f64>();
    }
    (acc / probes as f64).sqrt()
}
