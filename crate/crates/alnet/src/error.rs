use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Core(#[from] alnet_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn csv(path: &Path, err: csv::Error) -> Self {
        let source = match err.into_kind() {
            csv::ErrorKind::Io(e) => e,
            other => io::Error::other(format!("{other:?}")),
        };
        CliError::io(path, source)
    }

    /// 0 ok, 1 bad configuration or IO, 2 divergence, 3 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(alnet_core::Error::Divergence { .. }) => 2,
            CliError::Core(alnet_core::Error::Inconclusive(_)) => 3,
            _ => 1,
        }
    }
}
