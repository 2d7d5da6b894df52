use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::krylov::{build_x_lambda_r, LinearOperator, XLambdaSettings};
use crate::update::{Direction, TruncatedSvd, UpdateProblem};

/// The projection basis
///
/// ```text
///     Z = [ U_k  X  0   ]
///         [ 0    0  I_s ]
/// ```
///
/// kept in block form. `X` is absent for the basic basis.
#[derive(Debug, Clone)]
pub struct ProjectionBasis {
    pub u_block: DenseMatrix,
    pub x_block: Option<DenseMatrix>,
    pub s_identity: usize,
    pub lambda: Option<f64>,
    /// Rank asked of `X`; larger than its column count when the resolvent
    /// product turned out rank deficient.
    pub requested_r: usize,
    /// CG iterations spent building `X`.
    pub cg_iterations: usize,
}

impl ProjectionBasis {
    pub fn k(&self) -> usize {
        self.u_block.ncols()
    }

    pub fn r(&self) -> usize {
        self.x_block.as_ref().map_or(0, |x| x.ncols())
    }

    pub fn total_cols(&self) -> usize {
        self.k() + self.r() + self.s_identity
    }

    /// Rows of `Z`: `m + s`.
    pub fn total_rows(&self) -> usize {
        self.u_block.nrows() + self.s_identity
    }

    pub fn rank_deficient(&self) -> bool {
        self.r() < self.requested_r
    }

    /// `Z` times a coordinate block with `total_cols` rows.
    pub fn expand(&self, coords: &DenseMatrix) -> DenseMatrix {
        let (k, r) = (self.k(), self.r());
        let top_u = self.u_block.matmul(&coords.rows(0..k));
        let top = match &self.x_block {
            Some(x) => top_u.add(&x.matmul(&coords.rows(k..k + r))),
            None => top_u,
        };
        top.vstack(&coords.rows(k + r..self.total_cols()))
    }

    /// Dense `Z`, for tests and diagnostics only.
    pub fn to_dense(&self) -> DenseMatrix {
        self.expand(&DenseMatrix::identity(self.total_cols()))
    }
}

impl LinearOperator for ProjectionBasis {
    fn nrows(&self) -> usize {
        self.total_rows()
    }
    fn ncols(&self) -> usize {
        self.total_cols()
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let z = self.expand(&DenseMatrix::from_col_major(x.len(), 1, x.to_vec()));
        y.copy_from_slice(z.col(0));
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        let m = self.u_block.nrows();
        let (k, r) = (self.k(), self.r());
        let (top, bottom) = y.split_at(m);
        x[..k].copy_from_slice(&self.u_block.t_matvec(top));
        if let Some(xb) = &self.x_block {
            x[k..k + r].copy_from_slice(&xb.t_matvec(top));
        }
        x[k + r..].copy_from_slice(bottom);
    }
    fn flops_per_apply(&self) -> u64 {
        2 * (self.u_block.nrows() * (self.k() + self.r())) as u64
    }
}

/// `Z = blockdiag(U_k, I_s)`; `U_k` is the left factor for row updates and
/// the right factor for column updates. Costs no arithmetic.
pub fn build_z_basic(base_svd: &TruncatedSvd, s: usize, direction: Direction) -> Result<ProjectionBasis> {
    if s == 0 {
        return Err(Error::InvalidArgument("the update must add at least one row or column".into()));
    }
    let u_block = match direction {
        Direction::Rows => base_svd.u.clone(),
        Direction::Columns => base_svd.v.clone(),
    };
    Ok(ProjectionBasis {
        u_block,
        x_block: None,
        s_identity: s,
        lambda: None,
        requested_r: 0,
        cg_iterations: 0,
    })
}

/// `Z` enriched by `X_{lambda,r}`, the leading left singular directions of
/// `-B(lambda) B E^H`. A rank-deficient `X` shrinks the basis (and is
/// flagged); a rank-zero one leaves the basic basis.
pub fn build_z_enhanced(problem: &UpdateProblem<'_>, lambda: f64, settings: &XLambdaSettings) -> Result<ProjectionBasis> {
    if settings.r == 0 {
        return Err(Error::InvalidArgument("enhanced basis needs r >= 1".into()));
    }
    let mut basis = build_z_basic(problem.base_svd, problem.s(), problem.direction)?;
    let view = problem.row_view();
    let x = build_x_lambda_r(&view.b, view.u, &view.e, lambda, settings)?;
    basis.lambda = Some(lambda);
    basis.requested_r = settings.r;
    basis.cg_iterations = x.cg_iterations;
    if x.achieved_rank > 0 {
        basis.x_block = Some(x.basis);
    }
    Ok(basis)
}
