use std::path::PathBuf;

use magnetoflow::GeomError;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("`{key}`: {message}")]
    Validation { key: String, message: String },
    #[error(transparent)]
    Numeric(#[from] GeomError),
    /// The run completed but one of its checks did not hold.
    #[error("{0}")]
    Failed(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Machine-readable form written to stderr.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub key: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl CliError {
    pub fn validation(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            key: key.into(),
            message: message.into(),
        }
    }

    /// Re-labels a library error raised while checking a spec.
    pub fn invalid(key: impl Into<String>, err: GeomError) -> Self {
        Self::validation(key, err.to_string())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Validation { .. } => 2,
            CliError::Numeric(_) | CliError::Failed(_) | CliError::Io { .. } => 3,
        }
    }

    pub fn record(&self) -> ErrorRecord {
        let mut rec = ErrorRecord {
            error: "",
            message: String::new(),
            key: None,
            line: None,
            column: None,
            path: None,
        };
        match self {
            CliError::Parse { line, column, message } => {
                rec.error = "parse";
                rec.message = message.clone();
                rec.line = Some(*line);
                rec.column = Some(*column);
            }
            CliError::Validation { key, message } => {
                rec.error = "validation";
                rec.message = message.clone();
                rec.key = Some(key.clone());
            }
            CliError::Numeric(e) => {
                rec.error = "numeric";
                rec.message = e.to_string();
            }
            CliError::Failed(message) => {
                rec.error = "numeric";
                rec.message = message.clone();
            }
            CliError::Io { path, source } => {
                rec.error = "io";
                rec.message = source.to_string();
                rec.path = Some(path.display().to_string());
            }
        }
        rec
    }
}
