//! Column-major dense matrices and the handful of BLAS-like helpers the
//! solvers need.

use std::ops::{Index, IndexMut, Range};

use crate::flops;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix {
            nrows,
            ncols,
            data: vec![0.0; nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// # Panics
    /// If `data.len() != nrows * ncols`.
    pub fn from_col_major(nrows: usize, ncols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), nrows * ncols, "column-major buffer has wrong length");
        DenseMatrix { nrows, ncols, data }
    }

    /// Builds a matrix from a slice of equally long rows.
    ///
    /// # Panics
    /// If the rows are ragged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_fn(nrows, ncols, |i, j| {
            assert_eq!(rows[i].len(), ncols, "ragged rows");
            rows[i][j]
        })
    }

    pub fn from_columns(nrows: usize, cols: &[Vec<f64>]) -> Self {
        let mut data = Vec::with_capacity(nrows * cols.len());
        for c in cols {
            assert_eq!(c.len(), nrows, "column has wrong length");
            data.extend_from_slice(c);
        }
        DenseMatrix {
            nrows,
            ncols: cols.len(),
            data,
        }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for j in 0..ncols {
            for i in 0..nrows {
                data.push(f(i, j));
            }
        }
        DenseMatrix { nrows, ncols, data }
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

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn set_col(&mut self, j: usize, values: &[f64]) {
        self.col_mut(j).copy_from_slice(values);
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.ncols).map(|j| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.nrows).map(|i| self.row(i)).collect()
    }

    /// Copy of the columns in `range`.
    pub fn columns(&self, range: Range<usize>) -> DenseMatrix {
        let data = self.data[range.start * self.nrows..range.end * self.nrows].to_vec();
        DenseMatrix {
            nrows: self.nrows,
            ncols: range.len(),
            data,
        }
    }

    /// Copy of the rows in `range`.
    pub fn rows(&self, range: Range<usize>) -> DenseMatrix {
        DenseMatrix::from_fn(range.len(), self.ncols, |i, j| self[(range.start + i, j)])
    }

    pub fn select_columns(&self, idx: &[usize]) -> DenseMatrix {
        let cols: Vec<Vec<f64>> = idx.iter().map(|&j| self.col(j).to_vec()).collect();
        DenseMatrix::from_columns(self.nrows, &cols)
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)])
    }

    /// `[self, other]`.
    pub fn hstack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.nrows, other.nrows, "hstack row mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        DenseMatrix {
            nrows: self.nrows,
            ncols: self.ncols + other.ncols,
            data,
        }
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.ncols, other.ncols, "vstack column mismatch");
        DenseMatrix::from_fn(self.nrows + other.nrows, self.ncols, |i, j| {
            if i < self.nrows {
                self[(i, j)]
            } else {
                other[(i - self.nrows, j)]
            }
        })
    }

    /// `self * other`.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.ncols, other.nrows, "matmul inner dimension mismatch");
        let mut out = DenseMatrix::zeros(self.nrows, other.ncols);
        for j in 0..other.ncols {
            let oc = &mut out.data[j * self.nrows..(j + 1) * self.nrows];
            for (p, &b) in other.col(j).iter().enumerate() {
                if b != 0.0 {
                    axpy_raw(b, self.col(p), oc);
                }
            }
        }
        flops::add_usize(2 * self.nrows * self.ncols * other.ncols);
        out
    }

    /// `self^T * other`.
    pub fn t_matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.nrows, other.nrows, "t_matmul row mismatch");
        let mut out = DenseMatrix::zeros(self.ncols, other.ncols);
        for j in 0..other.ncols {
            for i in 0..self.ncols {
                out[(i, j)] = dot_raw(self.col(i), other.col(j));
            }
        }
        flops::add_usize(2 * self.nrows * self.ncols * other.ncols);
        out
    }

    /// `self * x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols, "matvec length mismatch");
        let mut y = vec![0.0; self.nrows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                axpy_raw(xj, self.col(j), &mut y);
            }
        }
        flops::add_usize(2 * self.nrows * self.ncols);
        y
    }

    /// `self^T * y`.
    pub fn t_matvec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.nrows, "t_matvec length mismatch");
        let x = (0..self.ncols).map(|j| dot_raw(self.col(j), y)).collect();
        flops::add_usize(2 * self.nrows * self.ncols);
        x
    }

    pub fn scale_columns(&mut self, factors: &[f64]) {
        assert_eq!(factors.len(), self.ncols);
        for (j, &f) in factors.iter().enumerate() {
            self.col_mut(j).iter_mut().for_each(|v| *v *= f);
        }
        flops::add_usize(self.nrows * self.ncols);
    }

    pub fn scaled(&self, alpha: f64) -> DenseMatrix {
        DenseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(|v| alpha * v).collect(),
        }
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.shape(), other.shape());
        DenseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.shape(), other.shape());
        DenseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm_raw(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `||Q^T Q - I||_F`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.ncols {
            for j in 0..self.ncols {
                let g = dot_raw(self.col(i), self.col(j)) - if i == j { 1.0 } else { 0.0 };
                acc += g * g;
            }
        }
        acc.sqrt()
    }

    /// Flips column signs so the largest-magnitude entry of each column is positive.
    /// Returns the applied signs.
    pub fn normalize_column_signs(&mut self) -> Vec<f64> {
        (0..self.ncols)
            .map(|j| {
                let s = sign_of_dominant(self.col(j));
                if s < 0.0 {
                    self.col_mut(j).iter_mut().for_each(|v| *v = -*v);
                }
                s
            })
            .collect()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &self.data[j * self.nrows + i]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.data[j * self.nrows + i]
    }
}

/// Sign (+1/-1) of the largest-magnitude entry; the first one wins ties.
pub(crate) fn sign_of_dominant(v: &[f64]) -> f64 {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v {
        if x.abs() > best {
            best = x.abs();
            sign = if x < 0.0 { -1.0 } else { 1.0 };
        }
    }
    sign
}

// Uncounted primitives; the counted wrappers below are what solvers call.

#[inline]
pub(crate) fn dot_raw(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn axpy_raw(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub(crate) fn norm_raw(a: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let ss: f64 = a.iter().map(|v| (v / scale) * (v / scale)).sum();
    scale * ss.sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    flops::add_usize(2 * a.len());
    dot_raw(a, b)
}

pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    flops::add_usize(2 * x.len());
    axpy_raw(alpha, x, y);
}

pub fn norm2(a: &[f64]) -> f64 {
    flops::add_usize(2 * a.len());
    norm_raw(a)
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    flops::add_usize(x.len());
    x.iter_mut().for_each(|v| *v *= alpha);
}

/// Removes the components of `v` along the orthonormal columns of `q`, twice.
/// Returns the norm of `v` before the first pass.
pub(crate) fn orthogonalize_against(q: &DenseMatrix, ncols: usize, v: &mut [f64]) -> f64 {
    let before = norm2(v);
    for _ in 0..2 {
        for j in 0..ncols {
            let c = dot(q.col(j), v);
            axpy(-c, q.col(j), v);
        }
    }
    before
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_matches_hand_computation() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]);
        let b = DenseMatrix::from_rows(&[vec![1.0, 0.0, -1.0], vec![2.0, 1.0, 0.0]]);
        let c = a.matmul(&b);
        assert_eq!(c.to_rows(), vec![vec![5.0, 2.0, -1.0], vec![11.0, 4.0, -3.0], vec![17.0, 6.0, -5.0]]);
        let ct = a.t_matmul(&a);
        assert_eq!(ct.to_rows(), vec![vec![35.0, 44.0], vec![44.0, 56.0]]);
    }

    #[test]
    fn stacking_and_slicing() {
        let a = DenseMatrix::from_fn(3, 2, |i, j| (i * 2 + j) as f64);
        let b = a.vstack(&a.rows(0..1));
        assert_eq!(b.nrows(), 4);
        assert_eq!(b.row(3), a.row(0));
        let c = a.hstack(&a.columns(1..2));
        assert_eq!(c.col(2), a.col(1));
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn sign_normalization_makes_dominant_entry_positive() {
        let mut a = DenseMatrix::from_rows(&[vec![0.1, 0.5], vec![-0.9, -0.2]]);
        let s = a.normalize_column_signs();
        assert_eq!(s, vec![-1.0, 1.0]);
        assert_eq!(a[(1, 0)], 0.9);
    }

    #[test]
    fn norm_is_overflow_safe() {
        assert!((norm_raw(&[3e200, 4e200]) / 5e200 - 1.0).abs() < 1e-15);
        assert_eq!(norm_raw(&[]), 0.0);
    }
}
