//! Candidate grid for `lambda`, closed-form diagnostics and the parameter-choice strategies.

mod diagnostics;
mod gcv;
mod grid;
mod strategies;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use diagnostics::{lcurve_curvature, penalty_k, residual_j, residual_j_prime, SpectralProfile};
pub use gcv::{gcv_bounds, gcv_trace, gcv_value};
pub use grid::{parameter_grid, ParameterGrid, DEFAULT_Q, DEFAULT_T_MAX, DEFAULT_ZETA0};
pub use strategies::{
    select_gcv, select_lcurve, select_morozov, select_oracle, tabulate, MorozovOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Morozov,
    Lcurve,
    Gcv,
    Oracle,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Oracle, Strategy::Lcurve, Strategy::Morozov, Strategy::Gcv];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Morozov => "morozov",
            Strategy::Lcurve => "lcurve",
            Strategy::Gcv => "gcv",
            Strategy::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "morozov" | "discrepancy" => Ok(Strategy::Morozov),
            "lcurve" | "l-curve" => Ok(Strategy::Lcurve),
            "gcv" => Ok(Strategy::Gcv),
            "oracle" | "opt" => Ok(Strategy::Oracle),
            other => Err(Error::InvalidArgument(format!(
                "unknown strategy '{other}' (choices: morozov, lcurve, gcv, oracle)"
            ))),
        }
    }
}

/// Diagnostics at one candidate `lambda`; columns a strategy does not use are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaDiagnostics {
    pub lambda: f64,
    pub j: f64,
    pub k: f64,
    pub kappa: Option<f64>,
    pub v: Option<f64>,
    pub f: Option<f64>,
    pub l2_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub strategy: Strategy,
    /// `None` only when the discrepancy assumption fails.
    pub chosen_lambda: Option<f64>,
    /// 1-based grid index `k`; after refinement, the index of the grid point the scan stopped at.
    pub chosen_index: Option<usize>,
    /// Bisection moved `chosen_lambda` off the grid into `[lambda_k, lambda_(k-1)]`.
    pub refined: bool,
    /// The discrepancy stayed positive on the whole grid with zero noise, so `lambda_T` was taken.
    pub at_grid_floor: bool,
    pub per_lambda: Vec<LambdaDiagnostics>,
    pub noise_norm_used: Option<f64>,
    pub sigma_mean: Option<f64>,
    pub assumption_ok: Option<bool>,
}

impl SelectionReport {
    fn new(strategy: Strategy, per_lambda: Vec<LambdaDiagnostics>) -> Self {
        Self {
            strategy,
            chosen_lambda: None,
            chosen_index: None,
            refined: false,
            at_grid_floor: false,
            per_lambda,
            noise_norm_used: None,
            sigma_mean: None,
            assumption_ok: None,
        }
    }

    fn choose(&mut self, k: usize) {
        self.chosen_index = Some(k);
        self.chosen_lambda = Some(self.per_lambda[k - 1].lambda);
    }
}
