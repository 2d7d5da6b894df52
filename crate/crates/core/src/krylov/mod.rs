//! Matrix-free Krylov kernels.
//!
//! Everything here talks to matrices through [`LinearOperator`], so the same
//! code runs on sparse matrices, their transposes, stacked pairs and the
//! composed projection operators of the updater.

mod cg;
mod gkl;
mod lanczos;
mod operator;
mod sigma;
mod xlambda;

pub use cg::{deflated_block_cg, CgHistory, CgOutput, CgSettings, DeflatedShifted};
pub use gkl::{gkl_bidiagonalize, gkl_svds, BidiagonalFactors, RitzTriplets};
pub use lanczos::{lanczos_sym_topk, LanczosOutput, LanczosSettings};
pub use operator::{adjoint_mismatch, Adjoint, FnOperator, Gram, LinearOperator, SparseView, Stacked, ADJOINT_RTOL};
pub use sigma::estimate_sigma1;
pub use xlambda::{build_x_lambda_r, XLambda, XLambdaMode, XLambdaSettings};
