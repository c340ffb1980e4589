use thiserror::Error;

/// Process exit code for a configuration problem.
pub const EXIT_CONFIG: i32 = 2;
/// Process exit code when a run diverged or did not converge.
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("config error at `{key}`: {message}")]
    ConfigKey { key: String, message: String },

    #[error(transparent)]
    Core(#[from] aggsim_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{0}")]
    NotConverged(String),
}

impl CliError {
    pub fn key(key: &str, message: impl Into<String>) -> Self {
        CliError::ConfigKey { key: key.to_string(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::ConfigKey { .. } => EXIT_CONFIG,
            CliError::Core(aggsim_core::Error::DivergenceDetected { .. })
            | CliError::Core(aggsim_core::Error::NotConverged { .. })
            | CliError::NotConverged(_) => EXIT_NOT_CONVERGED,
            // invalid parameters reaching the core are configuration problems
            CliError::Core(_) => EXIT_CONFIG,
            CliError::Io { .. } => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
