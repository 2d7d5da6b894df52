use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::kernels::{jacobi_svd, mgs_qr, FullSvd};
use crate::krylov::gkl_svds;
use crate::sparse::SparseMatrix;

/// A rank-`k` factorization `U diag(s) V^H`.
///
/// Shapes and the ordering of `s` are checked on construction. Orthonormality
/// of `v` is not: the updaters return `V = A^H U S^{-1}` as is.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSvd {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

/// Matrices with at most this many rows get their reference SVD from dense
/// Jacobi; larger ones from GKL.
pub const DENSE_REFERENCE_MAX_ROWS: usize = 500;
pub const GKL_REFERENCE_TOL: f64 = 1e-12;

impl TruncatedSvd {
    pub fn new(u: DenseMatrix, s: Vec<f64>, v: DenseMatrix) -> Result<Self> {
        let k = s.len();
        for (what, got) in [("left factor", u.ncols()), ("right factor", v.ncols())] {
            if got != k {
                return Err(Error::DimensionMismatch {
                    op: what,
                    expected: k,
                    got,
                });
            }
        }
        if s.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidArgument("singular values must be finite and nonnegative".into()));
        }
        if s.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidArgument("singular values must be nonincreasing".into()));
        }
        Ok(TruncatedSvd { u, s, v })
    }

    /// The empty factorization of an `m x n` matrix.
    pub fn empty(m: usize, n: usize) -> Self {
        TruncatedSvd {
            u: DenseMatrix::zeros(m, 0),
            s: Vec::new(),
            v: DenseMatrix::zeros(n, 0),
        }
    }

    /// Leading `k` triplets of a full SVD.
    pub fn from_full(full: &FullSvd, k: usize) -> Result<Self> {
        if k > full.s.len() {
            return Err(Error::InvalidArgument(format!("rank {k} exceeds {} available triplets", full.s.len())));
        }
        Ok(TruncatedSvd {
            u: full.u.columns(0..k),
            s: full.s[..k].to_vec(),
            v: full.v.columns(0..k),
        })
    }

    /// Rank-`k` SVD of `a`: dense Jacobi up to 500 rows, GKL with
    /// full reorthogonalization (tolerance 1e-12) beyond.
    pub fn compute(a: &SparseMatrix, k: usize, seed: u64) -> Result<Self> {
        if k > a.nrows().min(a.ncols()) {
            return Err(Error::InvalidArgument(format!(
                "rank {k} exceeds min dimension of a {}x{} matrix",
                a.nrows(),
                a.ncols()
            )));
        }
        if a.nrows() <= DENSE_REFERENCE_MAX_ROWS {
            return Self::from_full(&jacobi_svd(&a.to_dense())?, k);
        }
        let t = gkl_svds(a, k, GKL_REFERENCE_TOL, seed)?;
        let mut out = TruncatedSvd {
            u: t.u,
            s: t.s,
            v: t.v,
        };
        out.apply_sign_convention();
        Ok(out)
    }

    pub fn k(&self) -> usize {
        self.s.len()
    }

    pub fn nrows(&self) -> usize {
        self.u.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.v.nrows()
    }

    /// Keeps the leading `k` triplets.
    pub fn truncated(&self, k: usize) -> TruncatedSvd {
        let k = k.min(self.k());
        TruncatedSvd {
            u: self.u.columns(0..k),
            s: self.s[..k].to_vec(),
            v: self.v.columns(0..k),
        }
    }

    /// The factorization of the transpose.
    pub fn transpose(&self) -> TruncatedSvd {
        TruncatedSvd {
            u: self.v.clone(),
            s: self.s.clone(),
            v: self.u.clone(),
        }
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        us.scale_columns(&self.s);
        us.matmul(&self.v.transpose())
    }

    /// Flips pairs so the largest-magnitude entry of each left vector is positive.
    pub fn apply_sign_convention(&mut self) {
        let signs = self.u.normalize_column_signs();
        for (j, s) in signs.into_iter().enumerate() {
            if s < 0.0 {
                self.v.col_mut(j).iter_mut().for_each(|x| *x = -*x);
            }
        }
    }

    /// Replaces `v` by the orthonormal factor of its QR decomposition.
    pub fn orthonormalize_v(&mut self) {
        if self.k() > 0 {
            self.v = mgs_qr(&self.v).q;
        }
    }

    /// Largest deviation from orthonormality over both factors.
    pub fn orthonormality_error(&self) -> f64 {
        self.u.orthonormality_error().max(self.v.orthonormality_error())
    }
}
