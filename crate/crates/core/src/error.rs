use thiserror::Error;

/// Errors raised by every fallible operation in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("n must be between 1 and {max}, got {n}")]
    TrialCount { n: u64, max: u64 },
    #[error("k exceeds n (k = {k}, n = {n})")]
    KExceedsN { n: u64, k: u64 },
    #[error("proportion must lie in [0, 1], got {0}")]
    Proportion(f64),
    #[error("p must lie strictly inside (0, 1), got {0}")]
    OpenProportion(f64),
    #[error("delta must lie strictly inside (0, 1), got {0}")]
    Delta(f64),
    #[error("grid must be non-empty and strictly increasing")]
    Grid,
    #[error("replications must be at least 1")]
    Replications,
    #[error("polynomial: {0}")]
    Polynomial(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("predicate failed at trial {trial}: {message}")]
    Predicate { trial: u64, message: String },
}

impl Error {
    /// Whether the error reflects invalid input (as opposed to a failure while
    /// computing on valid input).
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Numerical(_) | Error::Predicate { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
