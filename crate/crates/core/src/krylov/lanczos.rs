use crate::dense::{axpy, dot, norm2, orthogonalize_against, scale, DenseMatrix};
use crate::error::{Error, PartialEigen, Result};
use crate::kernels::{random_orthogonal_unit, tridiag_eig};
use crate::krylov::LinearOperator;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosSettings {
    /// Ritz pair `(theta, z)` is accepted once `||A z - theta z|| <= tol * theta`.
    pub tol: f64,
    /// Step cap; `None` means `min(n, max(6k, 30))`.
    pub max_steps: Option<usize>,
    pub seed: u64,
}

impl Default for LanczosSettings {
    fn default() -> Self {
        LanczosSettings {
            tol: 1e-10,
            max_steps: None,
            seed: 0,
        }
    }
}

impl LanczosSettings {
    pub const STEP_MULTIPLIER: usize = 6;
    /// `6k` alone is too few steps to resolve one or two eigenpairs to 1e-10.
    pub const MIN_DEFAULT_STEPS: usize = 30;

    pub fn step_cap(&self, k: usize, n: usize) -> usize {
        self.max_steps
            .unwrap_or((Self::STEP_MULTIPLIER * k).max(Self::MIN_DEFAULT_STEPS))
            .min(n)
    }
}

#[derive(Debug, Clone)]
pub struct LanczosOutput {
    /// The `k` largest Ritz values, descending.
    pub theta: Vec<f64>,
    /// Matching Ritz vectors as columns.
    pub vectors: DenseMatrix,
    /// Residual estimates `|beta_j * s_{j,i}|`.
    pub residuals: Vec<f64>,
    /// Lanczos steps actually taken.
    pub steps: usize,
}

const BREAKDOWN_RTOL: f64 = 1e-14;
/// Ritz values below this fraction of the largest are judged against it.
const SMALL_THETA_FLOOR: f64 = 1e-8;

/// Unrestarted symmetric Lanczos with full reorthogonalization for the `k`
/// largest eigenpairs of a symmetric positive semidefinite operator.
///
/// On an invariant subspace the recurrence restarts from a fresh random
/// vector orthogonal to the basis, so repeated eigenvalues are found.
/// Convergence is checked every few steps once `k` steps are available.
pub fn lanczos_sym_topk<O: LinearOperator + ?Sized>(op: &O, k: usize, settings: &LanczosSettings) -> Result<LanczosOutput> {
    let n = op.nrows();
    if op.ncols() != n {
        return Err(Error::DimensionMismatch {
            op: "lanczos_sym_topk",
            expected: n,
            got: op.ncols(),
        });
    }
    let cap = settings.step_cap(k, n);
    if k > cap || cap > n {
        return Err(Error::InvalidArgument(format!(
            "need k <= max_steps <= n, got k={k}, max_steps={cap}, n={n}"
        )));
    }
    if k == 0 {
        return Ok(LanczosOutput {
            theta: Vec::new(),
            vectors: DenseMatrix::zeros(n, 0),
            residuals: Vec::new(),
            steps: 0,
        });
    }

    let mut q = DenseMatrix::zeros(n, cap);
    let mut alpha: Vec<f64> = Vec::with_capacity(cap);
    let mut beta: Vec<f64> = Vec::with_capacity(cap);
    let mut rng = rng::seeded(settings.seed, rng::STREAM_LANCZOS);
    let mut q0 = rng::gaussian_vec(&mut rng, n);
    let n0 = norm2(&q0);
    scale(1.0 / n0, &mut q0);
    q.set_col(0, &q0);

    let stride = (k / 5).max(1);
    let mut biggest: f64 = 0.0;
    let mut w = vec![0.0; n];
    let mut last = None;
    for j in 0..cap {
        op.apply_into(q.col(j), &mut w);
        let a = dot(q.col(j), &w);
        axpy(-a, q.col(j), &mut w);
        if j > 0 {
            axpy(-beta[j - 1], q.col(j - 1), &mut w);
        }
        orthogonalize_against(&q, j + 1, &mut w);
        let b = norm2(&w);
        alpha.push(a);
        biggest = biggest.max(a.abs()).max(b);
        let invariant = b <= BREAKDOWN_RTOL * biggest;
        let steps = j + 1;

        let at_cap = steps == cap;
        if steps >= k && (at_cap || (!invariant && (steps - k) % stride == 0)) {
            let pairs = ritz_pairs(&alpha, &beta, if invariant { 0.0 } else { b }, k)?;
            let converged = pairs.converged(settings.tol);
            if converged || at_cap {
                if converged {
                    return Ok(pairs.output(&q, steps));
                }
                last = Some(pairs.output(&q, steps));
                break;
            }
        }
        if at_cap {
            break;
        }
        if invariant {
            beta.push(0.0);
            let fresh = random_orthogonal_unit(&q, steps, settings.seed ^ (0x1a2c_0000 + j as u64));
            q.set_col(steps, &fresh);
        } else {
            beta.push(b);
            scale(1.0 / b, &mut w);
            q.set_col(steps, &w);
        }
    }
    let out = last.expect("Lanczos loop ends with a convergence check at the step cap");
    Err(Error::LanczosNotConverged(Box::new(PartialEigen {
        theta: out.theta,
        vectors: out.vectors,
        residuals: out.residuals,
        steps: out.steps,
    })))
}

/// Ritz values and residuals; the vectors are formed only on exit.
struct RitzPairs {
    theta: Vec<f64>,
    coords: DenseMatrix,
    residuals: Vec<f64>,
}

impl RitzPairs {
    fn converged(&self, tol: f64) -> bool {
        let top = self.theta.first().copied().unwrap_or(0.0).max(0.0);
        self.theta
            .iter()
            .zip(&self.residuals)
            .all(|(&t, &r)| r <= tol * t.max(SMALL_THETA_FLOOR * top))
    }

    fn output(self, q: &DenseMatrix, steps: usize) -> LanczosOutput {
        LanczosOutput {
            theta: self.theta,
            vectors: q.columns(0..self.coords.nrows()).matmul(&self.coords),
            residuals: self.residuals,
            steps,
        }
    }
}

fn ritz_pairs(alpha: &[f64], beta: &[f64], b_last: f64, k: usize) -> Result<RitzPairs> {
    let j = alpha.len();
    let (vals, vecs) = tridiag_eig(alpha, &beta[..j - 1])?;
    let idx: Vec<usize> = (0..j).rev().take(k).collect();
    let theta: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
    let residuals = idx.iter().map(|&i| (b_last * vecs[(j - 1, i)]).abs()).collect();
    let coords = vecs.select_columns(&idx);
    Ok(RitzPairs {
        theta,
        coords,
        residuals,
    })
}
