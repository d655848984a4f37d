use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config { line: Option<usize>, message: String },

    /// Parameters parsed but describe an impossible computation
    /// (horizon crossing, truncation below the tolerance, degenerate channel).
    #[error("invalid parameters: {0}")]
    Parameters(#[from] desitter_core::Error),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("verification failed: {0} hard check(s) did not pass")]
    Verification(usize),
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config {
            line: None,
            message: message.into(),
        }
    }

    pub fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_string(),
            source,
        }
    }

    /// 1 verification failure, 2 configuration or parameter error, 3 I/O error.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Verification(_) => 1,
            CliError::Config { .. } | CliError::Parameters(_) => 2,
            CliError::Io { .. } => 3,
        })
    }
}
