use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{}: {1}", .0.display())]
    Io(PathBuf, std::io::Error),
    #[error("{}: {1}", .0.display())]
    Json(PathBuf, serde_json::Error),
    #[error("unknown plot kind `{0}`, expected phase, profile or bounds")]
    UnknownKind(String),
    #[error(transparent)]
    Solver(#[from] affmax::Error),
}
