//! Rank-k truncated SVD updating for sparse matrices that grow by rows or
//! columns, via Rayleigh-Ritz projection onto a structured basis.
//!
//! The pieces, bottom up:
//! - [`sparse`], [`dense`], [`mm`]: matrix containers and Matrix Market I/O.
//! - [`kernels`]: Gram-Schmidt QR, Jacobi SVD/eigensolvers, tridiagonal QL.
//! - [`krylov`]: matrix-free Golub-Kahan-Lanczos, symmetric Lanczos,
//!   deflated block CG and the resolvent-sketch builder.
//! - [`update`]: projection bases, the composed operator and the row/column
//!   updaters.
//! - [`baselines`]: Zha-Simon and the Vecharynski "SV" scheme.
//! - [`harness`]: metrics, experiment protocols and complexity reporting.

pub mod baselines;
pub mod dense;
pub mod error;
pub mod flops;
pub mod harness;
pub mod kernels;
pub mod krylov;
pub mod mm;
pub mod rng;
pub mod sparse;
pub mod update;

pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use sparse::SparseMatrix;
pub use update::{Direction, TruncatedSvd, UpdateProblem};
