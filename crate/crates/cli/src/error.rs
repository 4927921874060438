use std::path::PathBuf;

use periodic_tikhonov::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{}: {}{message}", path.display(), line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Input {
        path: PathBuf,
        line: Option<u64>,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn input(path: impl Into<PathBuf>, line: Option<u64>, message: impl Into<String>) -> Self {
        CliError::Input {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Short machine-readable category printed as `error[category]`.
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Input { .. } => "input",
            CliError::Io { .. } => "io",
            CliError::Core(e) => match e {
                CoreError::InvalidArgument(_) => "invalid-argument",
                CoreError::DimensionMismatch { .. } => "dimension",
                CoreError::DegreeTooHigh { .. } => "degree",
                CoreError::UndefinedBound(_) => "undefined-bound",
                CoreError::ZeroModePenalized => "penalty",
                CoreError::CurvatureUndefined(_) => "curvature",
                CoreError::StrategyInapplicable(_) => "strategy",
                CoreError::AssumptionViolated(_) => "assumption",
                CoreError::GridExhausted { .. } => "grid-exhausted",
                CoreError::UndefinedSnr(_) => "snr",
                CoreError::Quadrature(_) => "quadrature",
                CoreError::UnknownFunction { .. } => "unknown-function",
            },
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Input { .. } => 3,
            CliError::Io { .. } => 5,
            CliError::Core(_) => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
