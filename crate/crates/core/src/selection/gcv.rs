//! Generalized cross-validation in closed form for `N = 2L + 1`.

use crate::approximant::check_lambda;
use crate::error::{Error, Result};
use crate::grid_basis::{check_len, dimension, FourierCoefficients};
use crate::penalty::PenaltySequence;

fn check_square(coeffs: &FourierCoefficients, penalty: &PenaltySequence) -> Result<()> {
    penalty.ensure_unpenalized_mean()?;
    check_len(penalty.degree(), coeffs.degree(), "penalty degree vs coefficient degree")?;
    if coeffs.n_points() != dimension(coeffs.degree()) {
        return Err(Error::StrategyInapplicable(format!(
            "closed-form GCV needs N = 2L+1, got N = {} with L = {}",
            coeffs.n_points(),
            coeffs.degree()
        )));
    }
    Ok(())
}

/// `Tr(I - A(lambda)) = sum lambda beta^2 / (1 + lambda beta^2)`.
pub fn gcv_trace(penalty: &PenaltySequence, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    penalty.ensure_unpenalized_mean()?;
    Ok(penalty
        .betas()
        .iter()
        .map(|b| {
            let lb2 = lambda * b * b;
            lb2 / (1.0 + lb2)
        })
        .sum())
}

/// `V(lambda) = sum (lambda beta^2 / (1 + lambda beta^2) c)^2 / Tr(I - A(lambda))^2`.
pub fn gcv_value(coeffs: &FourierCoefficients, penalty: &PenaltySequence, lambda: f64) -> Result<f64> {
    check_square(coeffs, penalty)?;
    let trace = gcv_trace(penalty, lambda)?;
    if !(trace > 0.0) {
        return Err(Error::UndefinedBound(format!(
            "GCV denominator vanishes at lambda = {lambda}"
        )));
    }
    let numerator: f64 = coeffs
        .values()
        .iter()
        .zip(penalty.betas())
        .map(|(c, b)| {
            let lb2 = lambda * b * b;
            (lb2 / (1.0 + lb2) * c).powi(2)
        })
        .sum();
    Ok(numerator / (trace * trace))
}

/// Lower and upper estimates `(1/2)(lambda z_min / (1 + lambda))^2` and
/// `(1 + lambda)^2 z_max^2 / (2 lambda^2)`, with `z` ranging over the
/// magnitudes of the `l >= 1` coefficients.
///
/// The lower estimate is not valid for every data vector: a flat spectrum
/// with `lambda` near 1 can fall below it. It holds for data whose
/// coefficients decay, which is the intended setting.
pub fn gcv_bounds(coeffs: &FourierCoefficients, lambda: f64) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    if lambda == 0.0 {
        return Err(Error::UndefinedBound("GCV bounds need lambda > 0".into()));
    }
    let tail = &coeffs.values()[1..];
    if tail.is_empty() {
        return Err(Error::UndefinedBound("GCV bounds need degree >= 1".into()));
    }
    let z_min = tail.iter().fold(f64::INFINITY, |m, c| m.min(c.abs()));
    let z_max = tail.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let lower = 0.5 * (lambda * z_min / (1.0 + lambda)).powi(2);
    let upper = (1.0 + lambda).powi(2) * z_max * z_max / (2.0 * lambda * lambda);
    Ok((lower, upper))
}
