use thiserror::Error;

/// Errors raised by the numerical kernels and the modules built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M^dag| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("operator is not an orthogonal projection: {0}")]
    NotProjection(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not completely positive: min Choi eigenvalue {min_eig:e}")]
    NotCompletelyPositive { min_eig: f64 },

    #[error("map is not trace preserving: max |sum K^dag K - I| = {residual:e}")]
    NotTracePreserving { residual: f64 },

    #[error("state is not a fixed point of the channel: residual {residual:e}")]
    NotFixedPoint { residual: f64 },

    #[error("invalid count table: {0}")]
    InvalidCounts(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, actual: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    /// True for failures caused by the numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_) | Error::NotCompletelyPositive { .. } | Error::NotTracePreserving { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
