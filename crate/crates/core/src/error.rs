use std::path::PathBuf;

use thiserror::Error;

use crate::dense::DenseMatrix;

/// Best-effort Ritz pairs returned alongside a non-converged Lanczos run.
#[derive(Debug, Clone)]
pub struct PartialEigen {
    pub theta: Vec<f64>,
    pub vectors: DenseMatrix,
    pub residuals: Vec<f64>,
    pub steps: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, got {got}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("index ({row}, {col}) out of range for a {nrows}x{ncols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },

    #[error("{path}: line {line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("unsupported Matrix Market format: {0}")]
    UnsupportedFormat(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("Lanczos did not reach tolerance in {} steps (worst residual {:.3e})", .0.steps, .0.residuals.iter().cloned().fold(0.0, f64::max))]
    LanczosNotConverged(Box<PartialEigen>),

    #[error("conjugate gradient stopped after {iterations} iterations with relative residuals {residuals:?}")]
    CgNotConverged {
        iterations: usize,
        residuals: Vec<f64>,
    },

    #[error("shifted operator is not positive definite (p'Ap = {curvature:.3e}); the shift must exceed the squared leading singular value")]
    NotPositiveDefinite { curvature: f64 },

    #[error("{what} columns are not orthonormal (deviation {deviation:.3e})")]
    NotOrthonormal { what: &'static str, deviation: f64 },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of a numerical method, as opposed to bad input or I/O.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::LanczosNotConverged(_)
                | Error::CgNotConverged { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::NotOrthonormal { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
