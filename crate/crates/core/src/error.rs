use thiserror::Error;

/// Errors produced by board construction, algebra, search and experiments.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("capacity exceeded: {what} (limit {limit})")]
    Capacity { what: String, limit: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("strategy `{strategy}` made an illegal move: {reason}")]
    StrategyFault { strategy: String, reason: String },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn capacity(what: impl Into<String>, limit: u64) -> Self {
        Error::Capacity { what: what.into(), limit }
    }
}
