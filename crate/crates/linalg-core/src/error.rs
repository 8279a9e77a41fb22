use thiserror::Error;

/// Error type shared by all operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Shapes or tensor factorizations do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// An input fails a structural check (hermiticity, norm, unitarity, ...).
    #[error("validation failed: {0}")]
    Validation(String),
    /// Two block maps do not share the same label set.
    #[error("label sets differ: {0}")]
    Labels(String),
}

pub type Result<T> = std::result::Result<T, Error>;
