use thiserror::Error;

/// Errors raised by the library.
///
/// `Consistency` marks a violated internal invariant (an exact division with
/// a remainder, a complement of the wrong dimension, ...). The command-line
/// tool maps it to its own exit status.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("polynomial is outside the span of the level basis; residual leading monomial {0}")]
    NotInSpan(String),

    #[error("level at grade {grade} has {states} states, above the cap of {cap}")]
    StateCap { grade: u32, states: usize, cap: usize },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
