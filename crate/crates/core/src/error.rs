use thiserror::Error;

use crate::radius::RadiusEstimate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |H - H*| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("function undefined at spectral value {value}")]
    DomainError { value: f64 },

    #[error("operator is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e} below -{tolerance:e}")]
    NotPositive { min_eigenvalue: f64, tolerance: f64 },

    #[error("enclosure width {width:e} above target {target:e} at the grid cap")]
    EnclosureNotReached {
        width: f64,
        target: f64,
        best: Box<RadiusEstimate>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function pair hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("index {index} out of range for ensemble of {count}")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("unknown bound id '{0}'")]
    UnknownBound(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
