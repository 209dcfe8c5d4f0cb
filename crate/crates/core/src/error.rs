use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid pattern: {0}")]
    Pattern(String),

    #[error("search budget of {budget} assignments exceeded")]
    Budget { budget: u64 },

    #[error("pattern has {found} {what}, limit is {limit}")]
    PatternTooLarge {
        what: &'static str,
        found: usize,
        limit: usize,
    },

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error("catalog: {0}")]
    Catalog(String),

    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
