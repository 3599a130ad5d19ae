use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path} is not valid UTF-8 (first bad byte at offset {offset})")]
    InvalidEncoding { path: PathBuf, offset: usize },

    #[error("duplicate document id `{0}`")]
    DuplicateId(String),

    #[error("need at least {needed} words, found {found}")]
    TooFewWords { needed: usize, found: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A statistic has no defined value for the given input.
    #[error("undefined statistic: {0}")]
    Undefined(String),

    #[error("spatial period undefined for `{word}`: it occurs {count} time(s)")]
    PeriodUndefined { word: String, count: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed manifest line {line}: {source}")]
    Manifest {
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
