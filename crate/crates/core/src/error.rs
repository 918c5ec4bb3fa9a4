use std::io;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Transformations, states or automata of incompatible sizes were combined.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A query that is structurally meaningless for its input.
    #[error("domain error: {0}")]
    Domain(String),
    /// An operation was called on an input that violates its precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The requested computation exceeds the configured size guard.
    #[error("resource guard: {0}")]
    ResourceGuard(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
