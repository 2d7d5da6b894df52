//! Rayleigh-Ritz updating of a truncated SVD after appending rows or columns.
//!
//! A row update `A = [B; E]` is projected onto `Z = blockdiag(U_k, I_s)`,
//! optionally enriched by `X_{lambda,r}`; the `k` leading eigenpairs of
//! `Z^H A A^H Z` give the new left factor and the right one follows from a
//! single product with `A^H`. Column updates run the same code on the
//! transposed problem.

mod basis;
mod operator;
mod problem;
mod rrsvd;
mod svd;

pub use basis::{build_z_basic, build_z_enhanced, ProjectionBasis};
pub use operator::{compose_zha_operator, ProjectedUpdate};
pub use problem::{Direction, RowView, UpdateProblem};
pub use rrsvd::{rr_svd, rr_svd_cols, rr_svd_rows, RitzResult, UpdateOptions};
pub use svd::{TruncatedSvd, DENSE_REFERENCE_MAX_ROWS, GKL_REFERENCE_TOL};
