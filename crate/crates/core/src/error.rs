use thiserror::Error;

/// Errors raised by the construction and verification pipeline.
///
/// Variants fall into two classes: validation failures (the input data
/// violates an invariant) and numerical failures (a solver did not
/// converge or a matrix was rank deficient). See [`Error::is_numerical`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid recurrence coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("invalid node sequence: {0}")]
    InvalidNodes(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sample set mismatch: {0}")]
    SampleMismatch(String),

    #[error("postcondition violated: {0}")]
    Postcondition(String),

    #[error("no sign change in bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("inverse map did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("rank deficient: rank {rank} < {required}")]
    RankDeficient { rank: usize, required: usize },

    #[error("DIMENSION_MISMATCH: null space dimension {nullspace} != {expected}")]
    DimensionMismatch { nullspace: usize, expected: usize },

    #[error("SPAN_MISMATCH: combined rank {combined} > {expected}")]
    SpanMismatch { combined: usize, expected: usize },

    #[error("io error: {0}")]
    Io(String),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// True for solver and rank failures, false for invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoSignChange { .. }
                | Error::NonConvergence { .. }
                | Error::RankDeficient { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
