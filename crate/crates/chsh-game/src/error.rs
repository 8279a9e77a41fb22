use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] linalg_core::Error),
    #[error("invalid strategy: {0}")]
    Strategy(String),
    #[error("degenerate structure: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
