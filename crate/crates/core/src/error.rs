use thiserror::Error;

/// Errors produced by the approximation and parameter-selection routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual} ({context})")]
    DimensionMismatch {
        expected: usize,
        actual: usize,
        context: &'static str,
    },

    /// `2L + 1 > N`: the trapezoidal rule no longer integrates products of
    /// basis functions exactly.
    #[error("degree {degree} too high for {n_points} nodes (need 2L+1 <= N)")]
    DegreeTooHigh { degree: usize, n_points: usize },

    #[error("bound undefined: {0}")]
    UndefinedBound(String),

    #[error("penalty with nonzero beta_(0,1) is only accepted by the barycentric evaluator")]
    ZeroModePenalized,

    #[error("curvature undefined: {0}")]
    CurvatureUndefined(String),

    #[error("strategy not applicable: {0}")]
    StrategyInapplicable(String),

    #[error("discrepancy assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("parameter grid exhausted: discrepancy stays positive down to lambda = {smallest}")]
    GridExhausted { smallest: f64 },

    #[error("undefined SNR: {0}")]
    UndefinedSnr(String),

    #[error("quadrature too coarse: {0}")]
    Quadrature(String),

    #[error("unknown function '{name}' (choices: {choices})")]
    UnknownFunction { name: String, choices: String },
}

pub type Result<T> = std::result::Result<T, Error>;
