use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("unknown configuration key `{key}`{}", .line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    UnknownKey { key: String, line: Option<usize> },

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("{0}")]
    Runtime(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("csv {}: {source}", .path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn csv(path: impl Into<PathBuf>) -> impl FnOnce(csv::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Csv { path, source }
    }

    /// 2 configuration, 3 runtime, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::UnknownKey { .. } | CliError::Constraint(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Io { .. } | CliError::Csv { .. } => 4,
        }
    }
}

impl From<morphodyn::Error> for CliError {
    fn from(err: morphodyn::Error) -> Self {
        match err {
            morphodyn::Error::InvalidConfig(_) | morphodyn::Error::DimensionTooSmall(_) => {
                CliError::Constraint(err.to_string())
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
