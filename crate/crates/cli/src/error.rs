use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numerical(#[from] blockexp::Error),

    #[error("{}{}: {msg}", path.display(), line.map(|l| format!(":{l}")).unwrap_or_default())]
    Io { path: PathBuf, line: Option<usize>, msg: String },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Self::Io {
            path: path.into(),
            line: None,
            msg: err.to_string(),
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Self::Io {
            path: path.into(),
            line: Some(line),
            msg: msg.into(),
        }
    }

    /// 1 usage, 2 numerical failure, 3 IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Numerical(_) => 2,
            Self::Io { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
