use crate::error::{Error, Result};
use crate::kernels::jacobi_svd;
use crate::krylov::gkl::gkl_bidiagonalize;
use crate::krylov::LinearOperator;

/// Lower estimate of the largest singular value of `op` from `steps` GKL
/// iterations (capped at `min(rows, cols)`). The estimate is nondecreasing
/// in `steps`.
pub fn estimate_sigma1<O: LinearOperator + ?Sized>(op: &O, steps: usize, seed: u64) -> Result<f64> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("sigma_1 estimate needs at least 2 steps, got {steps}")));
    }
    let steps = steps.min(op.nrows().min(op.ncols()));
    let f = gkl_bidiagonalize(op, steps, seed)?;
    if f.steps() == 0 {
        return Ok(0.0);
    }
    let svd = jacobi_svd(&f.bidiagonal())?;
    Ok(svd.s[0])
}
