use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed braid token {token:?}")]
    MalformedToken { token: String },

    #[error("generator index {index} out of range 1..={max} for {strands} strands")]
    GeneratorOutOfRange {
        index: usize,
        strands: usize,
        max: usize,
    },

    #[error("strand count must be at least 1")]
    NoStrands,

    #[error("capacity must be at least 1")]
    ZeroCapacity,

    #[error("state {counts:?} is not valid for capacity {capacity}")]
    InvalidState { counts: Vec<u32>, capacity: u32 },

    #[error("state index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("words live on different strand counts ({left} vs {right})")]
    StrandMismatch { left: usize, right: usize },

    #[error("{0}")]
    Precondition(String),

    #[error("q = 0 is not invertible")]
    NotInvertible,

    #[error("cannot parse rational {0:?}")]
    BadRational(String),

    #[error("invalid JSON encoding: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
