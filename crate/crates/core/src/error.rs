use thiserror::Error;

/// Errors produced by the library.
///
/// Domain errors (violated preconditions, infeasibility, solver limits) are
/// distinguished from malformed input so the CLI can map them to exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed model: {0}")]
    MalformedModel(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid cell: {0}")]
    InvalidCell(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("out of bounds: {0}")]
    OutOfBounds(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("slice undefined at jump time {0}; use slice_right/slice_left")]
    SliceAtGridTime(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("branch-and-bound node limit of {limit} exceeded")]
    NodeLimit { limit: usize },

    #[error("certificate check failed: {0}")]
    Certificate(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by unusable input rather than by the mathematics
    /// of a well-formed instance.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::MalformedModel(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
