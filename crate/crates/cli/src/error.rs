use std::path::PathBuf;

use clusterlab_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 when a certificate and a search result contradict each other, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::Inconsistency(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
