//! Compressed sparse row storage for the base matrix, the update block and
//! their stacked combination.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::flops;

/// Immutable CSR matrix.
///
/// Invariants: `row_ptr` is nondecreasing with `row_ptr[0] == 0` and
/// `row_ptr[nrows] == nnz`; column indices within a row are strictly
/// increasing and in range; no stored value is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Assembles a matrix from `(row, col, value)` triples. Duplicates are
    /// summed and entries that sum to exactly zero are dropped.
    pub fn from_coo(triples: &[(usize, usize, f64)], nrows: usize, ncols: usize) -> Result<Self> {
        if let Some(&(row, col, _)) = triples.iter().find(|&&(r, c, _)| r >= nrows || c >= ncols) {
            return Err(Error::IndexOutOfRange {
                row,
                col,
                nrows,
                ncols,
            });
        }
        let mut sorted: Vec<(usize, usize, f64)> = triples.to_vec();
        sorted.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        let mut rows = Vec::with_capacity(sorted.len());

        let mut iter = sorted.into_iter().peekable();
        while let Some((r, c, mut v)) = iter.next() {
            while let Some(&(r2, c2, v2)) = iter.peek() {
                if (r2, c2) != (r, c) {
                    break;
                }
                v += v2;
                iter.next();
            }
            if v != 0.0 {
                rows.push(r);
                col_idx.push(c);
                values.push(v);
            }
        }
        for &r in &rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(SparseMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Sparse copy of a dense matrix, dropping exact zeros.
    pub fn from_dense(a: &DenseMatrix) -> Self {
        let mut row_ptr = Vec::with_capacity(a.nrows() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                let v = a[(i, j)];
                if v != 0.0 {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(values.len());
        }
        SparseMatrix {
            nrows: a.nrows(),
            ncols: a.ncols(),
            row_ptr,
            col_idx,
            values,
        }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    /// Iterates over stored entries as `(row, col, value)`.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triples() {
            d[(i, j)] = v;
        }
        d
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.ncols + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for (i, j, v) in self.triples() {
            let p = next[j];
            col_idx[p] = i;
            values[p] = v;
            next[j] += 1;
        }
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        crate::dense::norm_raw(&self.values)
    }

    /// `y = A x`. Counts `2 nnz` FLOPs.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                op: "matvec",
                expected: self.ncols,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.nrows];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// `x = A^H y`. Counts `2 nnz` FLOPs.
    pub fn rmatvec(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.nrows {
            return Err(Error::DimensionMismatch {
                op: "rmatvec",
                expected: self.nrows,
                got: y.len(),
            });
        }
        let mut x = vec![0.0; self.ncols];
        self.rmatvec_into(y, &mut x);
        Ok(x)
    }

    /// Overwrites `y` with `A x`. Lengths are the caller's responsibility.
    pub(crate) fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
        }
        flops::add_usize(2 * self.nnz());
    }

    /// Overwrites `x` with `A^H y`.
    pub(crate) fn rmatvec_into(&self, y: &[f64], x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        x.iter_mut().for_each(|v| *v = 0.0);
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                x[j] += v * yi;
            }
        }
        flops::add_usize(2 * self.nnz());
    }

    /// `A * D` for a dense `D` (one sparse MV per column).
    pub fn mul_dense(&self, d: &DenseMatrix) -> DenseMatrix {
        assert_eq!(d.nrows(), self.ncols, "mul_dense dimension mismatch");
        let mut out = DenseMatrix::zeros(self.nrows, d.ncols());
        for j in 0..d.ncols() {
            self.matvec_into(d.col(j), out.col_mut(j));
        }
        out
    }

    /// `A^H * D` for a dense `D`.
    pub fn t_mul_dense(&self, d: &DenseMatrix) -> DenseMatrix {
        assert_eq!(d.nrows(), self.nrows, "t_mul_dense dimension mismatch");
        let mut out = DenseMatrix::zeros(self.ncols, d.ncols());
        for j in 0..d.ncols() {
            self.rmatvec_into(d.col(j), out.col_mut(j));
        }
        out
    }

    /// Rows `range` as a new matrix.
    pub fn slice_rows(&self, start: usize, end: usize) -> SparseMatrix {
        let (lo, hi) = (self.row_ptr[start], self.row_ptr[end]);
        SparseMatrix {
            nrows: end - start,
            ncols: self.ncols,
            row_ptr: self.row_ptr[start..=end].iter().map(|p| p - lo).collect(),
            col_idx: self.col_idx[lo..hi].to_vec(),
            values: self.values[lo..hi].to_vec(),
        }
    }

    /// Splits into `(A[0..upto, :], A[upto.., :])`.
    pub fn split_rows(&self, upto: usize) -> Result<(SparseMatrix, SparseMatrix)> {
        if upto == 0 || upto >= self.nrows {
            return Err(Error::IndexOutOfRange {
                row: upto,
                col: 0,
                nrows: self.nrows,
                ncols: self.ncols,
            });
        }
        Ok((self.slice_rows(0, upto), self.slice_rows(upto, self.nrows)))
    }

    /// Splits into `(A[:, 0..upto], A[:, upto..])`.
    pub fn split_cols(&self, upto: usize) -> Result<(SparseMatrix, SparseMatrix)> {
        if upto == 0 || upto >= self.ncols {
            return Err(Error::IndexOutOfRange {
                row: 0,
                col: upto,
                nrows: self.nrows,
                ncols: self.ncols,
            });
        }
        let t = self.transpose();
        let (l, r) = t.split_rows(upto)?;
        Ok((l.transpose(), r.transpose()))
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols != other.ncols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                expected: self.ncols,
                got: other.ncols,
            });
        }
        let offset = self.nnz();
        let mut row_ptr = self.row_ptr.clone();
        row_ptr.extend(other.row_ptr[1..].iter().map(|p| p + offset));
        let mut col_idx = self.col_idx.clone();
        col_idx.extend_from_slice(&other.col_idx);
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        Ok(SparseMatrix {
            nrows: self.nrows + other.nrows,
            ncols: self.ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// `[self, other]`.
    pub fn hstack(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.nrows != other.nrows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                expected: self.nrows,
                got: other.nrows,
            });
        }
        Ok(self.transpose().vstack(&other.transpose())?.transpose())
    }
}
