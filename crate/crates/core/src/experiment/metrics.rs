use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

use crate::approximant::TrigPolynomial;
use crate::error::{Error, Result};
use crate::grid_basis::{check_len, dimension, BasisTable};

pub const DEFAULT_EVAL_POINTS: usize = 10_000;
const MIN_EVAL_POINTS: usize = 1000;

/// `K` equidistant evaluation points `-pi + 2 pi j / K`, `j = 0..K`.
pub fn eval_grid(count: usize) -> Vec<f64> {
    (0..count).map(|j| -PI + TAU * j as f64 / count as f64).collect()
}

fn check_count(count: usize) -> Result<()> {
    if count < MIN_EVAL_POINTS {
        return Err(Error::InvalidArgument(format!(
            "error estimates need at least {MIN_EVAL_POINTS} evaluation points, got {count}"
        )));
    }
    Ok(())
}

fn l2_from_diffs(diffs: impl Iterator<Item = f64>, count: usize) -> f64 {
    (TAU / count as f64 * diffs.map(|d| d * d).sum::<f64>()).sqrt()
}

/// `((2 pi / K) sum_j (p(x_j) - f(x_j))^2)^(1/2)` on [`eval_grid`]`(K)`.
pub fn l2_error(approx: &TrigPolynomial, truth: impl Fn(f64) -> f64, count: usize) -> Result<f64> {
    check_count(count)?;
    let x = eval_grid(count);
    let p = approx.evaluate(&x);
    Ok(l2_from_diffs(p.iter().zip(&x).map(|(p, &x)| p - truth(x)), count))
}

/// `max_j |p(x_j) - f(x_j)|` on [`eval_grid`]`(K)`.
pub fn uniform_error(approx: &TrigPolynomial, truth: impl Fn(f64) -> f64, count: usize) -> Result<f64> {
    check_count(count)?;
    let x = eval_grid(count);
    let p = approx.evaluate(&x);
    Ok(p.iter().zip(&x).fold(0.0f64, |m, (p, &x)| m.max((p - truth(x)).abs())))
}

/// Tabulated basis and truth values on an evaluation grid, for measuring many
/// coefficient vectors of one degree against the same function.
#[derive(Debug, Clone)]
pub struct ErrorProbe {
    table: BasisTable,
    truth: Vec<f64>,
}

impl ErrorProbe {
    pub fn new(truth: impl Fn(f64) -> f64, degree: usize, count: usize) -> Result<Self> {
        check_count(count)?;
        let x = eval_grid(count);
        Ok(Self {
            truth: x.iter().map(|&x| truth(x)).collect(),
            table: BasisTable::new(&x, degree),
        })
    }

    pub fn degree(&self) -> usize {
        self.table.degree()
    }

    pub fn eval_points(&self) -> usize {
        self.truth.len()
    }

    fn diffs(&self, alpha: &[f64]) -> Result<Vec<f64>> {
        check_len(dimension(self.table.degree()), alpha.len(), "coefficients vs probe degree")?;
        Ok(self
            .table
            .synthesize(alpha)
            .iter()
            .zip(&self.truth)
            .map(|(p, f)| p - f)
            .collect())
    }

    pub fn l2_error(&self, alpha: &[f64]) -> Result<f64> {
        Ok(l2_from_diffs(self.diffs(alpha)?.into_iter(), self.truth.len()))
    }

    pub fn uniform_error(&self, alpha: &[f64]) -> Result<f64> {
        Ok(self.diffs(alpha)?.iter().fold(0.0f64, |m, d| m.max(d.abs())))
    }

    /// `(l2, uniform)` errors of one coefficient vector.
    pub fn errors(&self, alpha: &[f64]) -> Result<(f64, f64)> {
        let d = self.diffs(alpha)?;
        let sup = d.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        Ok((l2_from_diffs(d.into_iter(), self.truth.len()), sup))
    }

    /// [`errors`](Self::errors) for many coefficient vectors in parallel, order preserved.
    pub fn errors_many(&self, alphas: &[Vec<f64>]) -> Result<Vec<(f64, f64)>> {
        alphas.par_iter().map(|a| self.errors(a)).collect()
    }
}
