use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("score function is not injective: channels {0} and {1} share a score")]
    InvalidScore(u32, u32),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("degenerate chain: state {0} never leaves itself")]
    DegenerateChain(usize),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
