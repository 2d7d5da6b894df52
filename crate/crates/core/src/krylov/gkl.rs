use crate::dense::{axpy, norm2, orthogonalize_against, scale, DenseMatrix};
use crate::error::{Error, Result};
use crate::kernels::{jacobi_svd, random_orthogonal_unit};
use crate::krylov::LinearOperator;
use crate::rng;

/// Result of `d` steps of Golub-Kahan-Lanczos bidiagonalization:
/// `A * v_basis = u_basis * Bd` with `Bd` the `(d+1) x d` lower bidiagonal
/// matrix holding `alpha` on its diagonal and `beta` below it.
#[derive(Debug, Clone)]
pub struct BidiagonalFactors {
    pub u_basis: DenseMatrix,
    pub v_basis: DenseMatrix,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// The recurrence stopped early on a (numerically) zero coefficient.
    pub breakdown: bool,
    /// Coefficient `alpha_{d+1}` coupling `u_{d+1}` to the next right vector;
    /// `A^H u_basis = v_basis Bd^H + alpha_next v_{d+1} e_{d+1}^H`.
    pub alpha_next: f64,
}

/// Singular triplets of an operator approximated from a bidiagonalization.
#[derive(Debug, Clone)]
pub struct RitzTriplets {
    pub s: Vec<f64>,
    pub u: DenseMatrix,
    pub v: DenseMatrix,
    /// `|alpha_next * p_{d+1}|`, the exact residual norm of `A^H u - s v`.
    pub residuals: Vec<f64>,
}

impl BidiagonalFactors {
    pub fn steps(&self) -> usize {
        self.alpha.len()
    }

    pub fn bidiagonal(&self) -> DenseMatrix {
        let d = self.steps();
        let mut b = DenseMatrix::zeros(d + 1, d);
        for i in 0..d {
            b[(i, i)] = self.alpha[i];
            b[(i + 1, i)] = self.beta[i];
        }
        b
    }

    /// The `k` leading Ritz triplets (fewer if `d < k`).
    pub fn ritz(&self, k: usize) -> Result<RitzTriplets> {
        let d = self.steps();
        let k = k.min(d);
        if d == 0 {
            return Ok(RitzTriplets {
                s: Vec::new(),
                u: DenseMatrix::zeros(self.u_basis.nrows(), 0),
                v: DenseMatrix::zeros(self.v_basis.nrows(), 0),
                residuals: Vec::new(),
            });
        }
        let svd = jacobi_svd(&self.bidiagonal())?;
        let p = svd.u.columns(0..k);
        let q = svd.v.columns(0..k);
        let residuals = (0..k).map(|i| (self.alpha_next * p[(d, i)]).abs()).collect();
        Ok(RitzTriplets {
            s: svd.s[..k].to_vec(),
            u: self.u_basis.matmul(&p),
            v: self.v_basis.matmul(&q),
            residuals,
        })
    }
}

const BREAKDOWN_RTOL: f64 = 1e-14;

/// Runs `steps` GKL steps with full reorthogonalization of both bases,
/// starting from a seeded random left vector.
///
/// Breakdown (a coefficient below `1e-14` times the largest coefficient seen)
/// truncates the factorization; the shortened result is still exact. When
/// the recurrence breaks down on a `beta`, the trailing left vector is any
/// unit vector orthogonal to the others (zero when none exists).
pub fn gkl_bidiagonalize<O: LinearOperator + ?Sized>(op: &O, steps: usize, seed: u64) -> Result<BidiagonalFactors> {
    let (m, n) = (op.nrows(), op.ncols());
    if steps > m.min(n) {
        return Err(Error::InvalidArgument(format!(
            "GKL steps {steps} exceed min(rows, cols) = {}",
            m.min(n)
        )));
    }
    let mut u = DenseMatrix::zeros(m, steps + 1);
    let mut v = DenseMatrix::zeros(n, steps);
    let mut alpha = Vec::with_capacity(steps);
    let mut beta = Vec::with_capacity(steps);

    if m == 0 || n == 0 {
        return Ok(BidiagonalFactors {
            u_basis: DenseMatrix::zeros(m, 1.min(m)),
            v_basis: DenseMatrix::zeros(n, 0),
            alpha,
            beta,
            breakdown: true,
            alpha_next: 0.0,
        });
    }

    let mut rng = rng::seeded(seed, rng::STREAM_GKL);
    let mut u0 = rng::gaussian_vec(&mut rng, m);
    let n0 = norm2(&u0);
    scale(1.0 / n0, &mut u0);
    u.set_col(0, &u0);

    let mut biggest: f64 = 0.0;
    let mut breakdown = false;
    let mut d = 0;
    let mut w = vec![0.0; n];
    let mut p = vec![0.0; m];
    while d < steps {
        let i = d;
        // alpha_i v_i = A^H u_i - beta_{i-1} v_{i-1}
        op.apply_adjoint_into(u.col(i), &mut w);
        if i > 0 {
            axpy(-beta[i - 1], v.col(i - 1), &mut w);
        }
        orthogonalize_against(&v, i, &mut w);
        let a = norm2(&w);
        if a == 0.0 || a <= BREAKDOWN_RTOL * biggest {
            breakdown = true;
            break;
        }
        biggest = biggest.max(a);
        scale(1.0 / a, &mut w);
        v.set_col(i, &w);
        alpha.push(a);

        // beta_i u_{i+1} = A v_i - alpha_i u_i
        op.apply_into(v.col(i), &mut p);
        axpy(-a, u.col(i), &mut p);
        orthogonalize_against(&u, i + 1, &mut p);
        let b = norm2(&p);
        d += 1;
        if b == 0.0 || b <= BREAKDOWN_RTOL * biggest {
            beta.push(0.0);
            if i + 1 < m {
                let fresh = random_orthogonal_unit(&u, i + 1, seed ^ (i as u64 + 1));
                u.set_col(i + 1, &fresh);
            }
            breakdown = true;
            break;
        }
        biggest = biggest.max(b);
        scale(1.0 / b, &mut p);
        u.set_col(i + 1, &p);
        beta.push(b);
    }

    let alpha_next = if breakdown || d >= n {
        0.0
    } else {
        op.apply_adjoint_into(u.col(d), &mut w);
        if d > 0 {
            axpy(-beta[d - 1], v.col(d - 1), &mut w);
        }
        orthogonalize_against(&v, d, &mut w);
        norm2(&w)
    };

    Ok(BidiagonalFactors {
        u_basis: u.columns(0..d + 1),
        v_basis: v.columns(0..d),
        alpha,
        beta,
        breakdown,
        alpha_next,
    })
}

/// Leading singular triplets of `op` from GKL with full reorthogonalization,
/// growing the number of steps until every returned triplet has residual
/// `||A^H u - s v|| <= tol * s_1`.
pub fn gkl_svds<O: LinearOperator + ?Sized>(op: &O, k: usize, tol: f64, seed: u64) -> Result<RitzTriplets> {
    let limit = op.nrows().min(op.ncols());
    if k > limit {
        return Err(Error::InvalidArgument(format!("requested {k} triplets from an operator of rank <= {limit}")));
    }
    let mut steps = (2 * k + 10).min(limit);
    loop {
        let f = gkl_bidiagonalize(op, steps, seed)?;
        let t = f.ritz(k)?;
        let scale_ref = t.s.first().copied().unwrap_or(0.0);
        let done = t.residuals.iter().all(|&r| r <= tol * scale_ref);
        if (done && t.s.len() == k) || f.breakdown || steps == limit {
            if t.s.len() < k {
                return Err(Error::InvalidArgument(format!(
                    "operator has numerical rank {} < {k}",
                    t.s.len()
                )));
            }
            return Ok(t);
        }
        steps = (2 * steps).min(limit);
    }
}
