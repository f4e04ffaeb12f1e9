use thiserror::Error;

/// Errors produced by the decoding toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("no decomposition of weight <= {w_max} found (column {column:?})")]
    Decomposition { column: Option<usize>, w_max: usize },

    #[error("transfer matrix construction failed for {} column(s): {columns:?}", columns.len())]
    Transfer { columns: Vec<usize> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn ensure_len(what: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(invalid(format!(
            "{what} has length {got}, expected {expected}"
        )));
    }
    Ok(())
}
