use std::path::PathBuf;

/// Exit code for bad arguments, configs and unusable paths.
pub const EXIT_USAGE: u8 = 2;
/// Exit code for numerical failures.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] negsqueeze_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Usage(_) => "Usage",
            CliError::Config { .. } => "Config",
            CliError::Io { .. } => "Io",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if !e.is_usage() => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
