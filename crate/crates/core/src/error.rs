use thiserror::Error;

/// Errors produced by mesh construction, metrics, subdivision and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A triangle or edge refers to a vertex that does not exist, or repeats an index.
    #[error("structural error: {0}")]
    Structural(String),

    /// Non-finite coordinates or otherwise unusable input geometry.
    #[error("invalid input: {0}")]
    Input(String),

    /// A metric was evaluated outside its domain (degenerate triangle, non-positive limit, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Subdivision or sweep parameters that violate their constraints.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A stencil was applied to a triangle whose classification does not match it.
    #[error("logic error: {0}")]
    Logic(String),

    /// Binary STL payload shorter than its declared triangle count.
    #[error("truncated binary STL: record {record} at byte offset {offset} needs 50 bytes, {available} available")]
    TruncatedStl {
        record: usize,
        offset: usize,
        available: usize,
    },

    /// Malformed text input (ASCII STL, OBJ, JSON configuration).
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Whether the error is caused by the caller's input or configuration, as opposed to
    /// a broken internal invariant.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::Logic(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
