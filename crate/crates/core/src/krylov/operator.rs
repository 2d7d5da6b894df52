use crate::dense::{dot_raw, norm_raw, DenseMatrix};
use crate::error::{Error, Result};
use crate::rng;
use crate::sparse::SparseMatrix;

/// A matrix known only through its action and the action of its adjoint.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;

    /// `y = A x`, with `x.len() == ncols` and `y.len() == nrows`.
    fn apply_into(&self, x: &[f64], y: &mut [f64]);

    /// `x = A^H y`.
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]);

    /// Declared cost of one `apply` in FLOPs.
    fn flops_per_apply(&self) -> u64;

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows()];
        self.apply_into(x, &mut y);
        y
    }

    fn apply_adjoint(&self, y: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.ncols()];
        self.apply_adjoint_into(y, &mut x);
        x
    }

    /// Applies the operator column by column to a dense block.
    fn apply_block(&self, x: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.nrows(), x.ncols());
        for j in 0..x.ncols() {
            self.apply_into(x.col(j), out.col_mut(j));
        }
        out
    }

    fn apply_adjoint_block(&self, y: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.ncols(), y.ncols());
        for j in 0..y.ncols() {
            self.apply_adjoint_into(y.col(j), out.col_mut(j));
        }
        out
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn nrows(&self) -> usize {
        (**self).nrows()
    }
    fn ncols(&self) -> usize {
        (**self).ncols()
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply_into(x, y)
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        (**self).apply_adjoint_into(y, x)
    }
    fn flops_per_apply(&self) -> u64 {
        (**self).flops_per_apply()
    }
}

impl LinearOperator for SparseMatrix {
    fn nrows(&self) -> usize {
        SparseMatrix::nrows(self)
    }
    fn ncols(&self) -> usize {
        SparseMatrix::ncols(self)
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_into(x, y)
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        self.rmatvec_into(y, x)
    }
    fn flops_per_apply(&self) -> u64 {
        2 * self.nnz() as u64
    }
}

impl LinearOperator for DenseMatrix {
    fn nrows(&self) -> usize {
        DenseMatrix::nrows(self)
    }
    fn ncols(&self) -> usize {
        DenseMatrix::ncols(self)
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(&self.matvec(x));
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        x.copy_from_slice(&self.t_matvec(y));
    }
    fn flops_per_apply(&self) -> u64 {
        2 * (self.nrows() * self.ncols()) as u64
    }
}

/// A sparse matrix, or its transpose, seen as an operator. Lets the
/// column-update path reuse the row-update machinery on `A^H`.
#[derive(Debug, Clone, Copy)]
pub struct SparseView<'a> {
    mat: &'a SparseMatrix,
    transposed: bool,
}

impl<'a> SparseView<'a> {
    pub fn new(mat: &'a SparseMatrix) -> Self {
        SparseView { mat, transposed: false }
    }

    pub fn transposed(mat: &'a SparseMatrix) -> Self {
        SparseView { mat, transposed: true }
    }

    pub fn t(self) -> Self {
        SparseView {
            mat: self.mat,
            transposed: !self.transposed,
        }
    }

    pub fn matrix(&self) -> &'a SparseMatrix {
        self.mat
    }

    pub fn is_transposed(&self) -> bool {
        self.transposed
    }

    pub fn nnz(&self) -> usize {
        self.mat.nnz()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    /// The viewed matrix, densely.
    pub fn to_dense(&self) -> DenseMatrix {
        if self.transposed {
            self.mat.to_dense().transpose()
        } else {
            self.mat.to_dense()
        }
    }

    /// `self * D` for dense `D`.
    pub fn mul_dense(&self, d: &DenseMatrix) -> DenseMatrix {
        if self.transposed {
            self.mat.t_mul_dense(d)
        } else {
            self.mat.mul_dense(d)
        }
    }

    /// `self^H * D` for dense `D`.
    pub fn t_mul_dense(&self, d: &DenseMatrix) -> DenseMatrix {
        if self.transposed {
            self.mat.mul_dense(d)
        } else {
            self.mat.t_mul_dense(d)
        }
    }
}

impl<'a> From<&'a SparseMatrix> for SparseView<'a> {
    fn from(mat: &'a SparseMatrix) -> Self {
        SparseView::new(mat)
    }
}

impl LinearOperator for SparseView<'_> {
    fn nrows(&self) -> usize {
        if self.transposed {
            self.mat.ncols()
        } else {
            self.mat.nrows()
        }
    }
    fn ncols(&self) -> usize {
        if self.transposed {
            self.mat.nrows()
        } else {
            self.mat.ncols()
        }
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        if self.transposed {
            self.mat.rmatvec_into(x, y)
        } else {
            self.mat.matvec_into(x, y)
        }
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        if self.transposed {
            self.mat.matvec_into(y, x)
        } else {
            self.mat.rmatvec_into(y, x)
        }
    }
    fn flops_per_apply(&self) -> u64 {
        2 * self.mat.nnz() as u64
    }
}

/// The adjoint of another operator.
#[derive(Debug, Clone, Copy)]
pub struct Adjoint<O>(pub O);

impl<O: LinearOperator> LinearOperator for Adjoint<O> {
    fn nrows(&self) -> usize {
        self.0.ncols()
    }
    fn ncols(&self) -> usize {
        self.0.nrows()
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.0.apply_adjoint_into(x, y)
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        self.0.apply_into(y, x)
    }
    fn flops_per_apply(&self) -> u64 {
        self.0.flops_per_apply()
    }
}

/// `A A^H` as a symmetric positive semidefinite operator.
#[derive(Debug, Clone, Copy)]
pub struct Gram<O>(pub O);

impl<O: LinearOperator> LinearOperator for Gram<O> {
    fn nrows(&self) -> usize {
        self.0.nrows()
    }
    fn ncols(&self) -> usize {
        self.0.nrows()
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let t = self.0.apply_adjoint(x);
        self.0.apply_into(&t, y);
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        self.apply_into(y, x)
    }
    fn flops_per_apply(&self) -> u64 {
        2 * self.0.flops_per_apply()
    }
}

/// Vertical (`[top; bottom]`) or horizontal (`[left, right]`) concatenation
/// of two operators, applied without assembling the stacked matrix.
#[derive(Debug, Clone, Copy)]
pub struct Stacked<A, B> {
    first: A,
    second: B,
    vertical: bool,
}

impl<A: LinearOperator, B: LinearOperator> Stacked<A, B> {
    pub fn rows(top: A, bottom: B) -> Result<Self> {
        if top.ncols() != bottom.ncols() {
            return Err(Error::DimensionMismatch {
                op: "row stack",
                expected: top.ncols(),
                got: bottom.ncols(),
            });
        }
        Ok(Stacked {
            first: top,
            second: bottom,
            vertical: true,
        })
    }

    pub fn columns(left: A, right: B) -> Result<Self> {
        if left.nrows() != right.nrows() {
            return Err(Error::DimensionMismatch {
                op: "column stack",
                expected: left.nrows(),
                got: right.nrows(),
            });
        }
        Ok(Stacked {
            first: left,
            second: right,
            vertical: false,
        })
    }
}

impl<A: LinearOperator, B: LinearOperator> LinearOperator for Stacked<A, B> {
    fn nrows(&self) -> usize {
        if self.vertical {
            self.first.nrows() + self.second.nrows()
        } else {
            self.first.nrows()
        }
    }
    fn ncols(&self) -> usize {
        if self.vertical {
            self.first.ncols()
        } else {
            self.first.ncols() + self.second.ncols()
        }
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        if self.vertical {
            let (top, bottom) = y.split_at_mut(self.first.nrows());
            self.first.apply_into(x, top);
            self.second.apply_into(x, bottom);
        } else {
            let (x1, x2) = x.split_at(self.first.ncols());
            self.first.apply_into(x1, y);
            let t = self.second.apply(x2);
            crate::dense::axpy(1.0, &t, y);
        }
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        if self.vertical {
            let (y1, y2) = y.split_at(self.first.nrows());
            self.first.apply_adjoint_into(y1, x);
            let t = self.second.apply_adjoint(y2);
            crate::dense::axpy(1.0, &t, x);
        } else {
            let (x1, x2) = x.split_at_mut(self.first.ncols());
            self.first.apply_adjoint_into(y, x1);
            self.second.apply_adjoint_into(y, x2);
        }
    }
    fn flops_per_apply(&self) -> u64 {
        self.first.flops_per_apply() + self.second.flops_per_apply()
    }
}

type ApplyFn<'a> = Box<dyn Fn(&[f64], &mut [f64]) + 'a>;

/// An operator built from a pair of closures.
///
/// Construction checks adjoint consistency on random probes and rejects the
/// pair if `y^H (A x)` and `(A^H y)^H x` disagree beyond `1e-10` relative.
pub struct FnOperator<'a> {
    nrows: usize,
    ncols: usize,
    apply: ApplyFn<'a>,
    adjoint: ApplyFn<'a>,
    flops: u64,
}

impl<'a> FnOperator<'a> {
    pub fn new(
        nrows: usize,
        ncols: usize,
        apply: impl Fn(&[f64], &mut [f64]) + 'a,
        adjoint: impl Fn(&[f64], &mut [f64]) + 'a,
        flops_per_apply: u64,
    ) -> Result<Self> {
        let op = FnOperator {
            nrows,
            ncols,
            apply: Box::new(apply),
            adjoint: Box::new(adjoint),
            flops: flops_per_apply,
        };
        let gap = adjoint_mismatch(&op, 0x5eed);
        if gap > ADJOINT_RTOL {
            return Err(Error::InvalidArgument(format!(
                "operator and adjoint are inconsistent (relative gap {gap:.3e})"
            )));
        }
        Ok(op)
    }
}

impl LinearOperator for FnOperator<'_> {
    fn nrows(&self) -> usize {
        self.nrows
    }
    fn ncols(&self) -> usize {
        self.ncols
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        (self.apply)(x, y)
    }
    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        (self.adjoint)(y, x)
    }
    fn flops_per_apply(&self) -> u64 {
        self.flops
    }
}

pub const ADJOINT_RTOL: f64 = 1e-10;

/// Largest relative discrepancy `|y'(Ax) - (A'y)'x| / (|y||Ax| + |A'y||x|)`
/// over three random probe pairs.
pub fn adjoint_mismatch<O: LinearOperator + ?Sized>(op: &O, seed: u64) -> f64 {
    let mut rng = rng::seeded(seed, rng::STREAM_ADJOINT);
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let x = rng::gaussian_vec(&mut rng, op.ncols());
        let y = rng::gaussian_vec(&mut rng, op.nrows());
        let mut ax = vec![0.0; op.nrows()];
        let mut aty = vec![0.0; op.ncols()];
        op.apply_into(&x, &mut ax);
        op.apply_adjoint_into(&y, &mut aty);
        let lhs = dot_raw(&y, &ax);
        let rhs = dot_raw(&aty, &x);
        let scale = norm_raw(&y) * norm_raw(&ax) + norm_raw(&aty) * norm_raw(&x);
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).abs() / scale);
        }
    }
    worst
}
