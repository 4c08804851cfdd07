use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A computation produced a graded component above the weight cap.
    /// Exceeding a cap is always an error, never a silent truncation.
    #[error("weight cap exceeded: needed weight {needed}, cap {cap} ({context})")]
    CapExceeded {
        needed: i64,
        cap: i64,
        context: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
