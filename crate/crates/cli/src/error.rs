use mtree_spectral::SpectralError;
use thiserror::Error;

/// Failures that stop a run before any verdict. Inequality violations are
/// not errors; they are reported in the summary with exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    /// Schema or validation problem in the document or the flags (exit 2).
    #[error("configuration error: {0}")]
    Config(String),
    /// A computation failed (exit 3).
    #[error("numeric failure: {0}")]
    Numeric(#[from] SpectralError),
    /// Writing outputs failed (exit 3).
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numeric(_) | Self::Output(_) => 3,
        }
    }

    pub fn config(e: impl std::fmt::Display) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Output(e.to_string())
    }
}
