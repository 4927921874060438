use rayon::prelude::*;

use super::{LambdaDiagnostics, ParameterGrid, SelectionReport, SpectralProfile, Strategy};
use crate::error::{Error, Result};
use crate::experiment::ErrorProbe;
use crate::grid_basis::{dimension, TrapezoidalGrid};
use crate::penalty::PenaltySequence;
use crate::selection::gcv_value;

/// Relative slack on both sides of the discrepancy assumption, absorbing rounding
/// in `||L_L f - f||` (which is exactly zero in theory when `N = 2L + 1`).
const ASSUMPTION_SLACK: f64 = 1e-10;
const BISECTION_TOL: f64 = 1e-10;
const BISECTION_MAX_ITER: usize = 60;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MorozovOptions {
    /// Refine the grid choice by bisection on `log lambda` inside the bracketing pair.
    pub refine: bool,
}

/// Every diagnostic available for this data over `lambdas`: `J`, `K`, the
/// curvature where defined, `V` when `N = 2L + 1`, and `F` when a noise norm is given.
pub fn tabulate(
    samples: &[f64],
    grid: &TrapezoidalGrid,
    penalty: &PenaltySequence,
    lambdas: &ParameterGrid,
    noise_norm: Option<f64>,
) -> Result<Vec<LambdaDiagnostics>> {
    let profile = SpectralProfile::new(samples, grid, penalty)?;
    let square = dimension(penalty.degree()) == grid.len();
    let noise2 = noise_norm.map(|e| e * e);
    lambdas
        .lambdas()
        .iter()
        .map(|&lambda| {
            let j = profile.j(lambda);
            Ok(LambdaDiagnostics {
                lambda,
                j,
                k: profile.k(lambda),
                kappa: profile.curvature(lambda).ok(),
                v: if square { Some(gcv_value(profile.coefficients(), penalty, lambda)?) } else { None },
                f: noise2.map(|e2| j - e2),
                l2_error: None,
            })
        })
        .collect()
}

fn base_rows(profile: &SpectralProfile, lambdas: &ParameterGrid) -> Vec<LambdaDiagnostics> {
    lambdas
        .lambdas()
        .iter()
        .map(|&lambda| LambdaDiagnostics {
            lambda,
            j: profile.j(lambda),
            k: profile.k(lambda),
            kappa: None,
            v: None,
            f: None,
            l2_error: None,
        })
        .collect()
}

/// Discrepancy principle: scanning `k = 1..=T`, takes the first `lambda_k`
/// with `F = J - ||eps||^2 <= 0`.
///
/// When the assumption `||L_L f - f|| <= ||eps|| <= ||f - sigma||` fails the
/// report carries `assumption_ok = Some(false)` and no choice. When `F > 0` on
/// the whole grid this is [`Error::GridExhausted`], except for `||eps|| = 0`,
/// where `lambda_T` is returned with `at_grid_floor` set.
pub fn select_morozov(
    samples: &[f64],
    grid: &TrapezoidalGrid,
    penalty: &PenaltySequence,
    lambdas: &ParameterGrid,
    noise_norm: f64,
    options: MorozovOptions,
) -> Result<SelectionReport> {
    if !(noise_norm >= 0.0 && noise_norm.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise norm must be finite and >= 0, got {noise_norm}"
        )));
    }
    let profile = SpectralProfile::new(samples, grid, penalty)?;
    let e2 = noise_norm * noise_norm;
    let mut rows = base_rows(&profile, lambdas);
    for r in &mut rows {
        r.f = Some(r.j - e2);
    }
    let mut report = SelectionReport::new(Strategy::Morozov, rows);
    report.noise_norm_used = Some(noise_norm);
    report.sigma_mean = Some(profile.node_mean());

    let lower = profile.projection_residual();
    let upper = profile.centered_norm();
    let ok = lower <= noise_norm * (1.0 + ASSUMPTION_SLACK) + ASSUMPTION_SLACK * upper
        && noise_norm <= upper * (1.0 + ASSUMPTION_SLACK);
    report.assumption_ok = Some(ok);
    if !ok {
        return Ok(report);
    }

    let Some(pos) = report.per_lambda.iter().position(|r| r.j - e2 <= 0.0) else {
        if noise_norm == 0.0 {
            report.choose(lambdas.len());
            report.at_grid_floor = true;
            return Ok(report);
        }
        return Err(Error::GridExhausted { smallest: lambdas.smallest() });
    };
    let k = pos + 1;
    report.choose(k);

    let hi = lambdas.lambda(k - 1).expect("k - 1 is within the grid");
    let f = |lambda: f64| profile.j(lambda) - e2;
    if options.refine && noise_norm > 0.0 && f(hi) > 0.0 && f(lambdas.lambdas()[pos]) < 0.0 {
        report.chosen_lambda = Some(bisect(f, lambdas.lambdas()[pos], hi, BISECTION_TOL * e2));
        report.refined = true;
    }
    Ok(report)
}

// Bisection in log(lambda) for the root of an increasing `f` with f(lo) < 0 < f(hi).
fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut best = lo;
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (a + b);
        let lambda = mid.exp();
        let v = f(lambda);
        best = lambda;
        if v.abs() <= tol {
            break;
        }
        if v > 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    best
}

/// L-curve corner: the candidate of largest positive `kappa`, the orientation of the
/// L's corner. When no candidate bends that way (a single oscillating mode, say) the
/// largest `|kappa|` is taken instead. Ties go to the smallest `k`.
pub fn select_lcurve(
    samples: &[f64],
    grid: &TrapezoidalGrid,
    penalty: &PenaltySequence,
    lambdas: &ParameterGrid,
) -> Result<SelectionReport> {
    let profile = SpectralProfile::new(samples, grid, penalty)?;
    if !profile.has_oscillation() {
        return Err(Error::StrategyInapplicable(
            "L-curve needs a nonzero coefficient of degree >= 1".into(),
        ));
    }
    let mut rows = base_rows(&profile, lambdas);
    for r in &mut rows {
        r.kappa = profile.curvature(r.lambda).ok();
    }
    let best = argbest(rows.iter().map(|r| r.kappa.filter(|&k| k > 0.0)), |a, b| a > b)
        .or_else(|| argbest(rows.iter().map(|r| r.kappa.map(f64::abs)), |a, b| a > b))
        .ok_or_else(|| Error::StrategyInapplicable("curvature undefined at every candidate".into()))?;
    let mut report = SelectionReport::new(Strategy::Lcurve, rows);
    report.choose(best + 1);
    Ok(report)
}

/// GCV minimizer over the grid; requires `N = 2L + 1`.
pub fn select_gcv(
    samples: &[f64],
    grid: &TrapezoidalGrid,
    penalty: &PenaltySequence,
    lambdas: &ParameterGrid,
) -> Result<SelectionReport> {
    let profile = SpectralProfile::new(samples, grid, penalty)?;
    if !profile.has_oscillation() {
        return Err(Error::StrategyInapplicable(
            "GCV needs a nonzero coefficient of degree >= 1".into(),
        ));
    }
    let mut rows = base_rows(&profile, lambdas);
    for r in &mut rows {
        r.v = Some(gcv_value(profile.coefficients(), penalty, r.lambda)?);
    }
    let best = argbest(rows.iter().map(|r| r.v), |a, b| a < b).expect("grid is nonempty");
    let mut report = SelectionReport::new(Strategy::Gcv, rows);
    report.choose(best + 1);
    Ok(report)
}

/// Empirical optimum: the candidate whose approximant is closest in `L2` to the truth held by `probe`.
pub fn select_oracle(
    samples: &[f64],
    grid: &TrapezoidalGrid,
    penalty: &PenaltySequence,
    lambdas: &ParameterGrid,
    probe: &ErrorProbe,
) -> Result<SelectionReport> {
    let profile = SpectralProfile::new(samples, grid, penalty)?;
    let coeffs = profile.coefficients();
    let errors: Vec<f64> = lambdas
        .lambdas()
        .par_iter()
        .map(|&lambda| {
            let alpha: Vec<f64> = coeffs.values().iter().zip(penalty.shrinkage(lambda)).map(|(c, s)| c * s).collect();
            probe.l2_error(&alpha)
        })
        .collect::<Result<_>>()?;
    let mut rows = base_rows(&profile, lambdas);
    for (r, e) in rows.iter_mut().zip(&errors) {
        r.l2_error = Some(*e);
    }
    let best = argbest(errors.iter().map(|&e| Some(e)), |a, b| a < b).expect("grid is nonempty");
    let mut report = SelectionReport::new(Strategy::Oracle, rows);
    report.choose(best + 1);
    Ok(report)
}

// First index whose value strictly beats every earlier one.
fn argbest(values: impl Iterator<Item = Option<f64>>, better: impl Fn(f64, f64) -> bool) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.enumerate() {
        if let Some(v) = v.filter(|v| v.is_finite()) {
            if best.map_or(true, |(_, b)| better(v, b)) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}
