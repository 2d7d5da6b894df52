use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::krylov::{Gram, LinearOperator, SparseView};
use crate::update::{ProjectionBasis, RowView, UpdateProblem};

/// `C = Z^H A = [Sigma_k V_k^H; X^H B; E]`, an operator of size
/// `(k + r + s) x n`. `B` enters only through the stored triplet and the
/// precomputed `B^H X`.
pub struct ProjectedUpdate<'a> {
    v: &'a DenseMatrix,
    sigma: &'a [f64],
    btx: Option<DenseMatrix>,
    e: SparseView<'a>,
}

impl<'a> ProjectedUpdate<'a> {
    pub fn new(view: &RowView<'a>, basis: &ProjectionBasis) -> Result<Self> {
        if basis.u_block.nrows() != view.m() || basis.s_identity != view.s() || basis.k() != view.k() {
            return Err(Error::DimensionMismatch {
                op: "projection basis vs problem",
                expected: view.m() + view.s(),
                got: basis.total_rows(),
            });
        }
        let btx = basis.x_block.as_ref().map(|x| view.b.t_mul_dense(x));
        Ok(ProjectedUpdate {
            v: view.v,
            sigma: view.sigma,
            btx,
            e: view.e,
        })
    }

    fn k(&self) -> usize {
        self.sigma.len()
    }

    fn r(&self) -> usize {
        self.btx.as_ref().map_or(0, |b| b.ncols())
    }
}

impl LinearOperator for ProjectedUpdate<'_> {
    fn nrows(&self) -> usize {
        self.k() + self.r() + self.e.nrows()
    }
    fn ncols(&self) -> usize {
        self.v.nrows()
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let (k, r) = (self.k(), self.r());
        let vx = self.v.t_matvec(x);
        for i in 0..k {
            y[i] = self.sigma[i] * vx[i];
        }
        if let Some(btx) = &self.btx {
            y[k..k + r].copy_from_slice(&btx.t_matvec(x));
        }
        self.e.apply_into(x, &mut y[k + r..]);
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        let (k, r) = (self.k(), self.r());
        self.e.apply_adjoint_into(&y[k + r..], x);
        let sy: Vec<f64> = (0..k).map(|i| self.sigma[i] * y[i]).collect();
        let vs = self.v.matvec(&sy);
        x.iter_mut().zip(&vs).for_each(|(a, b)| *a += b);
        if let Some(btx) = &self.btx {
            let t = btx.matvec(&y[k..k + r]);
            x.iter_mut().zip(&t).for_each(|(a, b)| *a += b);
        }
    }
    fn flops_per_apply(&self) -> u64 {
        let n = self.v.nrows() as u64;
        2 * (n * (self.k() + self.r()) as u64) + self.e.flops_per_apply()
    }
}

/// `W = (Z^H A)(Z^H A)^H`, symmetric positive semidefinite of dimension
/// `k + r + s`, applied matrix-free at `4(n(k + r) + nnz(E))` FLOPs.
/// Column updates are handled on the transposed problem.
pub fn compose_zha_operator<'a>(problem: &UpdateProblem<'a>, basis: &ProjectionBasis) -> Result<Gram<ProjectedUpdate<'a>>> {
    Ok(Gram(ProjectedUpdate::new(&problem.row_view(), basis)?))
}
