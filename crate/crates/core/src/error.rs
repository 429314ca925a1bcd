use thiserror::Error;

/// Errors raised by the solver suite.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("far-field mismatch: operand ends differ by {mismatch:e} (tolerance {tolerance:e})")]
    FarFieldMismatch { mismatch: f64, tolerance: f64 },

    #[error("profile is not admissible: {0}")]
    NotAdmissible(String),

    #[error(
        "wall orientation beta = {beta} is not charge-free for alpha = {alpha}; \
         use beta = -pi/4 for 90-degree walls and beta = 0 for 180-degree walls"
    )]
    ChargedOrientation { alpha: f64, beta: f64 },

    #[error("plan does not match field grid: {0}")]
    PlanMismatch(String),

    #[error("insufficient tail data: {0}")]
    InsufficientTail(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
