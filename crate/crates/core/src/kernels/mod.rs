//! Small dense factorizations. The Jacobi solvers double as the independent
//! oracle that the Krylov code paths are checked against.

mod jacobi;
mod linsolve;
mod qr;
mod tridiag;

pub use jacobi::{jacobi_svd, sym_eig_jacobi, FullSvd};
pub use linsolve::{cholesky, cholesky_solve, inverse, lu_solve};
pub use qr::{mgs_qr, orthonormal_basis, QrFactors};
pub(crate) use qr::random_orthogonal_unit;
pub use tridiag::tridiag_eig;
