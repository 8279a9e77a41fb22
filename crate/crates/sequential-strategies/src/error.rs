use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] linalg_core::Error),
    #[error(transparent)]
    Game(#[from] chsh_game::Error),
    #[error("strategy error: {0}")]
    Strategy(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("zero-probability target: {0}")]
    ZeroProbability(String),
    #[error("unknown adversary: {0}")]
    UnknownAdversary(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
