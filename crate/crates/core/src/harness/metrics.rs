use serde::Serialize;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::kernels::{jacobi_svd, orthonormal_basis};
use crate::krylov::LinearOperator;
use crate::sparse::SparseMatrix;
use crate::update::TruncatedSvd;

/// FLOPs per phase, split like the complexity table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PhaseFlops {
    pub build_z: u64,
    pub build_w: u64,
    pub projected_solve: u64,
    /// Forming the output factors ("other" in the complexity table).
    pub recover_v: u64,
    pub total: u64,
}

impl PhaseFlops {
    pub fn with_total(mut self) -> Self {
        self.total = self.build_z + self.build_w + self.projected_solve + self.recover_v;
        self
    }
}

/// Sizes of an update seen as a row update (`A = [B; E]`, `B` is `m x n`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ProblemDims {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub k: usize,
    /// Columns of `X_{lambda,r}` or of the SV right basis; 0 otherwise.
    pub r: usize,
    pub nnz_a: usize,
    pub nnz_e: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct UpdateReport {
    pub sigma: Vec<f64>,
    /// `|sigma_i - ref_i| / ref_i`.
    pub rel_err: Option<Vec<f64>>,
    /// `||A v_i - sigma_i u_i|| / sigma_i`.
    pub residual: Vec<f64>,
    pub flops: PhaseFlops,
    /// Lanczos steps of the projected solve (0 for the baselines).
    pub lanczos_steps: usize,
    pub wall_time: f64,
    pub converged: bool,
    pub warnings: Vec<String>,
    pub dims: ProblemDims,
    pub method: String,
}

impl UpdateReport {
    pub fn max_rel_err(&self) -> Option<f64> {
        self.rel_err.as_ref().map(|v| v.iter().cloned().fold(0.0, f64::max))
    }

    pub fn max_residual(&self) -> f64 {
        self.residual.iter().cloned().fold(0.0, f64::max)
    }
}

/// Scores `svd` as an approximation of the leading triplets of `a`.
/// `reference` holds the exact leading singular values of `a`.
pub fn evaluate(svd: &TruncatedSvd, a: &SparseMatrix, reference: Option<&[f64]>) -> Result<UpdateReport> {
    let k = svd.k();
    if svd.nrows() != a.nrows() {
        return Err(Error::DimensionMismatch {
            op: "evaluate left factor",
            expected: a.nrows(),
            got: svd.nrows(),
        });
    }
    if svd.ncols() != a.ncols() {
        return Err(Error::DimensionMismatch {
            op: "evaluate right factor",
            expected: a.ncols(),
            got: svd.ncols(),
        });
    }
    if let Some(r) = reference {
        if r.len() < k {
            return Err(Error::DimensionMismatch {
                op: "evaluate reference",
                expected: k,
                got: r.len(),
            });
        }
    }
    let mut residual = Vec::with_capacity(k);
    let mut av = vec![0.0; a.nrows()];
    for i in 0..k {
        a.apply_into(svd.v.col(i), &mut av);
        let sigma = svd.s[i];
        let norm = av
            .iter()
            .zip(svd.u.col(i))
            .map(|(x, u)| (x - sigma * u).powi(2))
            .sum::<f64>()
            .sqrt();
        residual.push(if sigma > 0.0 { norm / sigma } else { f64::INFINITY });
    }
    let rel_err = reference.map(|r| (0..k).map(|i| (svd.s[i] - r[i]).abs() / r[i]).collect());
    Ok(UpdateReport {
        sigma: svd.s.clone(),
        rel_err,
        residual,
        flops: PhaseFlops::default(),
        lanczos_steps: 0,
        wall_time: 0.0,
        converged: true,
        warnings: Vec::new(),
        dims: ProblemDims::default(),
        method: String::new(),
    })
}

/// Principal angles (radians, largest first) between `range(a)` and
/// `range(b)`, from the sines: singular values of `(I - Qa Qa^H) Qb`.
/// If `b` spans more than `a`, the roles are exchanged.
pub fn principal_angles(a: &DenseMatrix, b: &DenseMatrix) -> Result<Vec<f64>> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            op: "principal_angles",
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    let mut qa = orthonormal_basis(a, 1e-12);
    let mut qb = orthonormal_basis(b, 1e-12);
    if qb.ncols() > qa.ncols() {
        std::mem::swap(&mut qa, &mut qb);
    }
    if qb.ncols() == 0 {
        return Ok(Vec::new());
    }
    let resid = qb.sub(&qa.matmul(&qa.t_matmul(&qb)));
    let sv = jacobi_svd(&resid)?;
    Ok(sv.s.iter().map(|s| s.min(1.0).asin()).collect())
}

pub fn max_principal_angle(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    Ok(principal_angles(a, b)?.into_iter().fold(0.0, f64::max))
}
