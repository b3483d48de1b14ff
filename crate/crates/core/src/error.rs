use thiserror::Error;

/// Errors produced by the counting library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex count {0} exceeds the supported maximum of 64")]
    TooManyVertices(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
    #[error("duplicate edge {0}")]
    DuplicateEdge(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}
