use std::path::PathBuf;

use crate::bench::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{}:{source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Core(#[from] photon_su6::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: invalid state file: {message}", path.display())]
    StateFile { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl LabError {
    /// 1 for a failed verification, 2 for bad usage or input.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Verification(_) => 1,
            _ => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> LabError {
        let path = path.into();
        move |source| LabError::Io { path, source }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
