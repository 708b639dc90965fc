use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{file}:{line}: {message}")]
    RuleLoad {
        file: String,
        line: usize,
        message: String,
    },

    #[error("rejected url {url:?}: {reason}")]
    RejectedUrl { url: String, reason: String },

    #[error("query error: {0}")]
    Query(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("no catalog at {}; run `index` first", path.display())]
    MissingCatalog { path: PathBuf },

    #[error("malformed {what} at line {line}: {message}")]
    Parse {
        what: &'static str,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
