use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "ptik",
    version,
    about = "Tikhonov-regularized trigonometric approximation on equidistant nodes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Fit one regularized approximant and write its coefficients and a dense evaluation.
    Approximate(RunArgs),
    /// Tabulate J, K, curvature, GCV and discrepancy over the lambda grid and apply the strategies.
    Select(RunArgs),
    /// Run every strategy over several noise levels on a gallery function.
    Sweep(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Approximate(_) => "approximate",
            Command::Select(_) => "select",
            Command::Sweep(_) => "sweep",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Approximate(a) | Command::Select(a) | Command::Sweep(a) => a,
        }
    }
}

/// Options shared by all subcommands. Anything left unset falls back to the
/// `--config` file, then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML file with the same keys as the long flags (underscores for dashes).
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Built-in test signal: f1, f2, sine, square, sawtooth, triangle.
    #[arg(long, conflicts_with = "input")]
    pub gallery: Option<String>,

    /// CSV with columns x,y sampled on the trapezoidal grid x_j = -pi + 2 pi (j-1)/N.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Number of nodes N (odd); the degree is L = (N-1)/2.
    #[arg(long)]
    pub n: Option<usize>,

    /// Laplace penalty exponent s (beta = l^s).
    #[arg(long)]
    pub s: Option<f64>,

    /// morozov, lcurve, gcv, oracle, manual, or all; comma-separated for several.
    #[arg(long)]
    pub strategy: Option<String>,

    /// Regularization parameter for the manual strategy.
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Noise level(s) in dB: a value, a comma list, or start:stop:step.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    pub snr_db: Option<String>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Largest grid value is zeta0 * q.
    #[arg(long)]
    pub zeta0: Option<f64>,

    #[arg(long)]
    pub q: Option<f64>,

    /// Number of grid values T.
    #[arg(long = "t-max")]
    pub t_max: Option<usize>,

    /// Evaluation points K for dense output and error estimates.
    #[arg(long = "eval-points")]
    pub eval_points: Option<usize>,

    /// Known noise norm ||eps||_{2,t_N} for the discrepancy principle.
    #[arg(long = "noise-norm")]
    pub noise_norm: Option<f64>,

    #[arg(long = "output-dir", short = 'o')]
    pub output_dir: Option<PathBuf>,

    /// Write per-lambda error curves (sweep).
    #[arg(long = "emit-curves")]
    pub emit_curves: bool,

    /// Refine the discrepancy choice by bisection between grid points.
    #[arg(long)]
    pub refine: bool,
}
