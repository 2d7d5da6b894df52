use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::flops;
use crate::krylov::{lanczos_sym_topk, LanczosSettings, LinearOperator};
use crate::update::{compose_zha_operator, Direction, ProjectionBasis, TruncatedSvd, UpdateProblem};

#[derive(Debug, Clone, Copy)]
pub struct UpdateOptions {
    /// Rank of the result; `None` keeps the base rank.
    pub k_out: Option<usize>,
    pub lanczos: LanczosSettings,
    /// Re-orthonormalize `V` after recovering it (wanted when the result
    /// seeds the next update).
    pub reorthogonalize_v: bool,
    /// Finish with the best available Ritz pairs when Lanczos stops at its
    /// step cap, instead of failing.
    pub accept_unconverged: bool,
}

impl Default for UpdateOptions {
    fn default() -> Self {
        UpdateOptions {
            k_out: None,
            lanczos: LanczosSettings::default(),
            reorthogonalize_v: false,
            accept_unconverged: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RitzResult {
    /// Ritz singular values, nonincreasing.
    pub theta: Vec<f64>,
    /// Coordinates of the left Ritz vectors in the basis `Z`.
    pub f: DenseMatrix,
    /// Lanczos steps taken.
    pub steps_used: usize,
    pub residuals: Vec<f64>,
    /// Some Ritz values were numerically zero and were dropped.
    pub truncated: bool,
    pub converged: bool,
    /// FLOPs of the projected eigenproblem.
    pub flops_solve: u64,
    /// FLOPs of forming both factors from the Ritz vectors.
    pub flops_recover: u64,
}

/// Ritz values below this fraction of the largest cannot be inverted safely.
const ZERO_THETA_RTOL: f64 = 1e-12;

/// Row update `A = [B; E]` by Rayleigh-Ritz on `Z^H A A^H Z`:
/// `U = Z F`, `S = Theta`, `V = A^H U S^{-1}`.
pub fn rr_svd_rows(problem: &UpdateProblem<'_>, basis: &ProjectionBasis, options: &UpdateOptions) -> Result<(TruncatedSvd, RitzResult)> {
    if problem.direction != Direction::Rows {
        return Err(Error::InvalidArgument("rr_svd_rows needs a row update".into()));
    }
    rr_svd_oriented(problem, basis, options)
}

/// Column update `A = [B, E]` by Rayleigh-Ritz on `Z^H A^H A Z`:
/// `V = Z G`, `S = Theta`, `U = A V S^{-1}`.
pub fn rr_svd_cols(problem: &UpdateProblem<'_>, basis: &ProjectionBasis, options: &UpdateOptions) -> Result<(TruncatedSvd, RitzResult)> {
    if problem.direction != Direction::Columns {
        return Err(Error::InvalidArgument("rr_svd_cols needs a column update".into()));
    }
    rr_svd_oriented(problem, basis, options)
}

/// Dispatches on the problem's direction.
pub fn rr_svd(problem: &UpdateProblem<'_>, basis: &ProjectionBasis, options: &UpdateOptions) -> Result<(TruncatedSvd, RitzResult)> {
    rr_svd_oriented(problem, basis, options)
}

fn rr_svd_oriented(problem: &UpdateProblem<'_>, basis: &ProjectionBasis, options: &UpdateOptions) -> Result<(TruncatedSvd, RitzResult)> {
    let view = problem.row_view();
    let k_out = options.k_out.unwrap_or(problem.k());
    if k_out > basis.total_cols() {
        return Err(Error::InvalidArgument(format!(
            "requested rank {k_out} exceeds basis dimension {}",
            basis.total_cols()
        )));
    }
    let op = compose_zha_operator(problem, basis)?;

    let (solved, flops_solve) = flops::measure(|| lanczos_sym_topk(&op, k_out, &options.lanczos));
    let (eig, converged) = match solved {
        Ok(out) => (out, true),
        Err(Error::LanczosNotConverged(partial)) if options.accept_unconverged => (
            crate::krylov::LanczosOutput {
                theta: partial.theta,
                vectors: partial.vectors,
                residuals: partial.residuals,
                steps: partial.steps,
            },
            false,
        ),
        Err(e) => return Err(e),
    };

    let theta_all: Vec<f64> = eig.theta.iter().map(|&t| t.max(0.0).sqrt()).collect();
    let top = theta_all.first().copied().unwrap_or(0.0);
    let keep = theta_all.iter().take_while(|&&t| t > ZERO_THETA_RTOL * top && t > 0.0).count();
    let truncated = keep < theta_all.len();
    let theta = theta_all[..keep].to_vec();
    let f = eig.vectors.columns(0..keep);

    let (factors, flops_recover) = flops::measure(|| {
        let mut left = basis.expand(&f);
        let mut right = view.stacked().apply_adjoint_block(&left);
        let inv: Vec<f64> = theta.iter().map(|t| 1.0 / t).collect();
        right.scale_columns(&inv);
        if options.reorthogonalize_v && keep > 0 {
            right = crate::kernels::mgs_qr(&right).q;
        }
        let signs = left.normalize_column_signs();
        (left, right, signs)
    });
    let (left, mut right, signs) = factors;
    let mut f = f;
    for (j, s) in signs.into_iter().enumerate() {
        if s < 0.0 {
            right.col_mut(j).iter_mut().for_each(|x| *x = -*x);
            f.col_mut(j).iter_mut().for_each(|x| *x = -*x);
        }
    }

    let svd = match problem.direction {
        Direction::Rows => TruncatedSvd::new(left, theta.clone(), right)?,
        Direction::Columns => TruncatedSvd::new(right, theta.clone(), left)?,
    };
    Ok((
        svd,
        RitzResult {
            theta,
            f,
            steps_used: eig.steps,
            residuals: eig.residuals[..keep].to_vec(),
            truncated,
            converged,
            flops_solve,
            flops_recover,
        },
    ))
}
