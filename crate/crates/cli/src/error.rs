use std::path::PathBuf;
use thiserror::Error;

/// CLI failures, split by exit code: 1 for I/O and parse problems, 2 for
/// detection-domain problems (step too large, invalid bounds, infeasible
/// constraints). Error text goes to stderr only, never into a report file.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{path}: {message}")]
    Json { path: PathBuf, message: String },
    #[error("{path}:{line}: non-uniform grid: {message}")]
    NonUniformGrid { path: PathBuf, line: usize, message: String },
    #[error("{path}: domain is not [0,1]: {message} (rescale x to [0,1] and multiply m1 by the original length L and m2 by L^2)")]
    DomainNotUnit { path: PathBuf, message: String },
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::Json { .. }
            | CliError::NonUniformGrid { .. }
            | CliError::DomainNotUnit { .. } => 1,
            CliError::Config(_) | CliError::Domain(_) => 2,
        }
    }
}

impl From<jumpscope::DetectError> for CliError {
    fn from(e: jumpscope::DetectError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<jumpscope::ModelError> for CliError {
    fn from(e: jumpscope::ModelError) -> Self {
        CliError::Domain(e.to_string())
    }
}
