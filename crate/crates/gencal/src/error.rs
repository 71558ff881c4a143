use thiserror::Error;

/// Failures that stop a command before any report is produced.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn parse(path: impl Into<String>, message: impl ToString) -> Self {
        CliError::Parse { path: path.into(), message: message.to_string() }
    }

    pub fn validation(path: impl Into<String>, message: impl ToString) -> Self {
        CliError::Validation { path: path.into(), message: message.to_string() }
    }

    /// Process exit code: parse-type problems map to 2, schema violations to 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::UnknownSuite(_) | CliError::Io(_) => 2,
            CliError::Validation { .. } => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
