use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] entangle_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// The machine-readable error record written to stderr.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Core(_) => "runtime",
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }

    pub fn record(&self) -> ErrorRecord {
        let message = match self {
            CliError::Core(e) => e.to_string(),
            other => other.to_string(),
        };
        ErrorRecord { kind: self.kind(), message, exit_code: self.exit_code() }
    }
}
