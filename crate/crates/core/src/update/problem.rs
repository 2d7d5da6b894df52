use crate::error::{Error, Result};
use crate::krylov::{LinearOperator, SparseView, Stacked};
use crate::sparse::SparseMatrix;
use crate::update::TruncatedSvd;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `A = [B; E]`.
    Rows,
    /// `A = [B, E]`.
    Columns,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rows" => Ok(Direction::Rows),
            "cols" | "columns" => Ok(Direction::Columns),
            other => Err(Error::InvalidArgument(format!("unknown direction '{other}'"))),
        }
    }
}

/// A base matrix `B`, its rank-`k` SVD and the block `E` being appended.
#[derive(Debug, Clone, Copy)]
pub struct UpdateProblem<'a> {
    pub base: &'a SparseMatrix,
    pub base_svd: &'a TruncatedSvd,
    pub update: &'a SparseMatrix,
    pub direction: Direction,
}

/// The problem seen as a row update. For column updates everything is
/// transposed: `B^H` gets the rows `E^H`, and the roles of `U` and `V` swap.
#[derive(Debug, Clone, Copy)]
pub struct RowView<'a> {
    /// `m x n`.
    pub b: SparseView<'a>,
    /// `s x n`.
    pub e: SparseView<'a>,
    /// `m x k` left factor.
    pub u: &'a crate::dense::DenseMatrix,
    pub sigma: &'a [f64],
    /// `n x k` right factor.
    pub v: &'a crate::dense::DenseMatrix,
}

impl<'a> RowView<'a> {
    pub fn m(&self) -> usize {
        self.b.nrows()
    }
    pub fn n(&self) -> usize {
        self.b.ncols()
    }
    pub fn s(&self) -> usize {
        self.e.nrows()
    }
    pub fn k(&self) -> usize {
        self.sigma.len()
    }
    /// `[B; E]` as an operator.
    pub fn stacked(&self) -> Stacked<SparseView<'a>, SparseView<'a>> {
        Stacked::rows(self.b, self.e).expect("row view shapes validated at construction")
    }
}

impl<'a> UpdateProblem<'a> {
    pub fn new(base: &'a SparseMatrix, base_svd: &'a TruncatedSvd, update: &'a SparseMatrix, direction: Direction) -> Result<Self> {
        let (m, n) = base.shape();
        match direction {
            Direction::Rows if update.ncols() != n => {
                return Err(Error::DimensionMismatch {
                    op: "row update width",
                    expected: n,
                    got: update.ncols(),
                })
            }
            Direction::Columns if update.nrows() != m => {
                return Err(Error::DimensionMismatch {
                    op: "column update height",
                    expected: m,
                    got: update.nrows(),
                })
            }
            _ => {}
        }
        if base_svd.nrows() != m || base_svd.ncols() != n {
            return Err(Error::DimensionMismatch {
                op: "base SVD shape",
                expected: m * n,
                got: base_svd.nrows() * base_svd.ncols(),
            });
        }
        if base_svd.k() > m.min(n) {
            return Err(Error::InvalidArgument(format!("base rank {} exceeds min({m}, {n})", base_svd.k())));
        }
        Ok(UpdateProblem {
            base,
            base_svd,
            update,
            direction,
        })
    }

    pub fn k(&self) -> usize {
        self.base_svd.k()
    }

    /// Number of appended rows or columns.
    pub fn s(&self) -> usize {
        match self.direction {
            Direction::Rows => self.update.nrows(),
            Direction::Columns => self.update.ncols(),
        }
    }

    pub fn row_view(&self) -> RowView<'a> {
        let svd = self.base_svd;
        match self.direction {
            Direction::Rows => RowView {
                b: SparseView::new(self.base),
                e: SparseView::new(self.update),
                u: &svd.u,
                sigma: &svd.s,
                v: &svd.v,
            },
            Direction::Columns => RowView {
                b: SparseView::transposed(self.base),
                e: SparseView::transposed(self.update),
                u: &svd.v,
                sigma: &svd.s,
                v: &svd.u,
            },
        }
    }

    /// The updated matrix `A`, assembled.
    pub fn assembled(&self) -> Result<SparseMatrix> {
        match self.direction {
            Direction::Rows => self.base.vstack(self.update),
            Direction::Columns => self.base.hstack(self.update),
        }
    }
}
