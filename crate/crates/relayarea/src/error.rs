use std::path::PathBuf;

use relayarea_core::ModelError;

/// Everything a run can fail with, grouped by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error in {origin}: {message}")]
    Config { origin: String, message: String },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] ModelError),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn config(origin: &str, message: impl std::fmt::Display) -> CliError {
        CliError::Config { origin: origin.to_string(), message: message.to_string().trim_end().to_string() }
    }

    /// 1 config, 2 infeasible, 3 numerical or output failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 1,
            CliError::Infeasible(_) => 2,
            CliError::Numerical(_) | CliError::Output { .. } => 3,
        }
    }
}
