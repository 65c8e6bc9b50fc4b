use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("output: {0}")]
    Write(#[from] std::io::Error),

    #[error("config: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("config: {0}")]
    Serialize(#[from] toml::ser::Error),

    #[error("config: {0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] casimir_core::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}
