use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ZETA0: f64 = 1.0;
/// `2^(-1/10)`: ten grid points per halving of `lambda`.
pub const DEFAULT_Q: f64 = 0.933_032_991_536_807_4;
pub const DEFAULT_T_MAX: usize = 400;

/// Candidate set `lambda_k = zeta0 * q^k`, `k = 1..=t_max`, strictly decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterGrid {
    zeta0: f64,
    q: f64,
    t_max: usize,
    lambdas: Vec<f64>,
}

impl ParameterGrid {
    pub fn zeta0(&self) -> f64 {
        self.zeta0
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `lambda_k` with the 1-based index `k`; `k = 0` gives `zeta0`.
    pub fn lambda(&self, k: usize) -> Option<f64> {
        match k {
            0 => Some(self.zeta0),
            _ => self.lambdas.get(k - 1).copied(),
        }
    }

    /// Smallest candidate `lambda_T`.
    pub fn smallest(&self) -> f64 {
        self.lambdas[self.lambdas.len() - 1]
    }

    /// 1-based index of an exact grid member.
    pub fn index_of(&self, lambda: f64) -> Option<usize> {
        self.lambdas.iter().position(|&l| l == lambda).map(|p| p + 1)
    }
}

impl Default for ParameterGrid {
    fn default() -> Self {
        parameter_grid(DEFAULT_ZETA0, DEFAULT_Q, DEFAULT_T_MAX).expect("default grid parameters are valid")
    }
}

pub fn parameter_grid(zeta0: f64, q: f64, t_max: usize) -> Result<ParameterGrid> {
    if !(zeta0 > 0.0 && zeta0.is_finite()) {
        return Err(Error::InvalidArgument(format!("zeta0 must be positive and finite, got {zeta0}")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(format!("q must lie in (0, 1), got {q}")));
    }
    if t_max == 0 {
        return Err(Error::InvalidArgument("t_max must be at least 1".into()));
    }
    let lambdas: Vec<f64> = (1..=t_max).map(|k| zeta0 * q.powi(k as i32)).collect();
    if lambdas.iter().any(|&l| !(l > 0.0)) || lambdas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument(format!(
            "grid zeta0={zeta0}, q={q}, T={t_max} underflows before its last entry"
        )));
    }
    Ok(ParameterGrid { zeta0, q, t_max, lambdas })
}
