use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed stencil, potential table, domain or experiment setup.
    #[error("configuration error: {0}")]
    Config(String),
    /// An input value lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Arguments of incompatible dimension or shape.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// A caller-side precondition was not met.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Text input could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    /// An invariant that should hold by construction was found broken.
    #[error("internal error: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
