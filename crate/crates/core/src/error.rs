use std::io;

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("attribute coverage: {0}")]
    Coverage(String),

    #[error("invalid value: {0}")]
    Validation(String),

    #[error("invalid pattern: {0}")]
    Pattern(String),

    #[error("membership constraint must be in (0, 1], got {0}")]
    Domain(f64),

    #[error("configuration: {0}")]
    Config(String),

    #[error("cache consistency: {0}")]
    Cache(String),

    #[error("oracle refused instance: {0}")]
    Refused(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for failures caused by the filesystem rather than by input content.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
