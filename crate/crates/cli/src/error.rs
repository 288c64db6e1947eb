use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

/// Everything that stops a run before a verdict is reached. All of these
/// exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("invalid config: `seed` is mandatory (set it in the file or pass --seed)")]
    MissingSeed,

    #[error("budget overflow: {0}")]
    Budget(String),

    #[error("invalid input: {0}")]
    Core(#[from] hardy_core::Error),

    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Short tag printed in front of the diagnostic.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse(_) => "parse",
            CliError::Config(_) | CliError::MissingSeed => "config",
            CliError::Budget(_) => "budget",
            CliError::Core(hardy_core::Error::Aliasing { .. }) => "budget",
            CliError::Core(_) => "input",
            CliError::Csv(_) => "output",
        }
    }
}
