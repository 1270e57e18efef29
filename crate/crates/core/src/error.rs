use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arity violation: {0}")]
    Arity(String),
    #[error("element does not belong to model: {0}")]
    Mismatch(String),
    #[error("state cap of {cap} exceeded")]
    Overflow { cap: usize },
    #[error("generation test failed: {0}")]
    Generation(String),
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
