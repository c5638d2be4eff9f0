use std::io;
use std::path::Path;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] sfc_core::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("word vectors, byte {offset}: {message}")]
    WordVectors { offset: usize, message: String },
    #[error("embedding endpoint: {0}")]
    Endpoint(String),
    #[error("embedding service response: {0}")]
    Contract(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Argument(String),
}

impl Error {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Process exit code: 2 for bad arguments, 3 for bad data, 4 when the
    /// embedding service fails.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Argument(_) => 2,
            Error::Core(e) if e.is_argument() => 2,
            Error::Endpoint(_) | Error::Contract(_) => 4,
            _ => 3,
        }
    }
}
