use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a project directory: {}", .0.display())]
    NotAProject(PathBuf),

    #[error(transparent)]
    Path(#[from] crate::paths::PathError),

    #[error("not a text script: {0}")]
    NotText(String),

    #[error("unknown check: {0}")]
    UnknownCheck(String),

    #[error("{path}:{line}: invalid config entry: {message}")]
    Config {
        path: String,
        line: usize,
        message: String,
    },

    #[error("script is outside the project directory: {0}")]
    OutsideProject(String),

    #[error("runner not found: {0}")]
    RunnerNotFound(String),

    #[error("invalid runner template: {0}")]
    RunnerTemplate(String),

    #[error("destination already exists: {0}")]
    DestinationExists(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

pub(crate) trait IoContext<T> {
    fn context(self, context: impl FnOnce() -> String) -> Result<T>;
}

impl<T> IoContext<T> for io::Result<T> {
    fn context(self, context: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|source| Error::Io {
            context: context(),
            source,
        })
    }
}
