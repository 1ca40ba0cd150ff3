use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cvtele_core::Error),

    #[error("invalid arguments: {0}")]
    Args(String),

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("ledger line {line}: {reason}")]
    Ledger { line: usize, reason: String },

    #[error("grid row {row}: {reason}")]
    Grid { row: usize, reason: String },

    #[error("CVTELE_THREADS must be a positive integer, got {0:?}")]
    Threads(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
