//! Closed-form regularized least squares on the trapezoidal grid.
//!
//! Because the basis is orthonormal for the discrete inner product whenever
//! `2L + 1 <= N`, the normal equations are diagonal and the minimizer is the
//! shrunk discrete Fourier expansion
//!
//! ```text
//! alpha(l,k) = <f, Y(l,k)>_N / (1 + lambda * beta(l,k)^2)
//! ```
//!
//! `lambda = 0` gives hyperinterpolation, which interpolates the data when
//! `N = 2L + 1`.

use std::f64::consts::{SQRT_2, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid_basis::{
    analyze, check_degree, check_len, reduce_angle, FourierCoefficients, HarmonicIndex,
    TrapezoidalGrid, INV_SQRT_PI, INV_SQRT_TAU,
};
use crate::penalty::PenaltySequence;

/// Point lists longer than this are evaluated in parallel.
const PAR_EVAL_THRESHOLD: usize = 4096;

/// Distance below which the barycentric evaluator snaps to a node value.
pub const NODE_SNAP_DISTANCE: f64 = 1e-12;

/// A real trigonometric polynomial `sum alpha(l,k) Y(l,k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    coeffs: FourierCoefficients,
}

impl TrigPolynomial {
    pub fn new(coeffs: FourierCoefficients) -> Self {
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.degree()
    }

    pub fn coefficients(&self) -> &FourierCoefficients {
        &self.coeffs
    }

    pub fn value_at(&self, x: f64) -> f64 {
        let x = reduce_angle(x);
        let a = self.coeffs.values();
        let mut sum = a[0] * INV_SQRT_TAU;
        for ell in 1..=self.degree() {
            let (s, c) = (ell as f64 * x).sin_cos();
            sum += (a[2 * ell - 1] * c + a[2 * ell] * s) * INV_SQRT_PI;
        }
        sum
    }

    /// Evaluates at every point. Each value is summed in a fixed order, so the
    /// result does not depend on how the work is split across threads.
    pub fn evaluate(&self, points: &[f64]) -> Vec<f64> {
        if points.len() >= PAR_EVAL_THRESHOLD {
            points.par_iter().map(|&x| self.value_at(x)).collect()
        } else {
            points.iter().map(|&x| self.value_at(x)).collect()
        }
    }

    /// `||p||_{L2}` by Parseval on the coefficients.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.sum_of_squares().sqrt()
    }
}

/// Minimizer of the regularized least-squares problem for one `lambda`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularizedApproximant {
    n_points: usize,
    lambda: f64,
    penalty: PenaltySequence,
    polynomial: TrigPolynomial,
    source: FourierCoefficients,
    zero_rhs: bool,
}

impl RegularizedApproximant {
    /// Applies the shrinkage for `lambda` to already-computed discrete coefficients.
    pub fn from_source(
        source: FourierCoefficients,
        lambda: f64,
        penalty: &PenaltySequence,
    ) -> Result<Self> {
        check_lambda(lambda)?;
        check_len(penalty.degree(), source.degree(), "penalty degree vs coefficient degree")?;
        let alpha: Vec<f64> = source
            .values()
            .iter()
            .zip(penalty.shrinkage(lambda))
            .map(|(c, s)| c * s)
            .collect();
        let alpha = FourierCoefficients::from_values(source.degree(), source.n_points(), alpha)?;
        Ok(Self {
            n_points: source.n_points(),
            lambda,
            penalty: penalty.clone(),
            polynomial: TrigPolynomial::new(alpha),
            zero_rhs: source.is_zero(),
            source,
        })
    }

    pub fn degree(&self) -> usize {
        self.source.degree()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn penalty(&self) -> &PenaltySequence {
        &self.penalty
    }

    /// Solved coefficients `alpha`.
    pub fn alpha(&self) -> &FourierCoefficients {
        self.polynomial.coefficients()
    }

    /// Unshrunk discrete coefficients `<f, Y>_N`.
    pub fn source(&self) -> &FourierCoefficients {
        &self.source
    }

    pub fn polynomial(&self) -> &TrigPolynomial {
        &self.polynomial
    }

    /// `A^T W f = 0`: the data has no component in the approximation space and
    /// the result is the zero polynomial.
    pub fn rhs_vanishes(&self) -> bool {
        self.zero_rhs
    }

    pub fn evaluate(&self, points: &[f64]) -> Vec<f64> {
        self.polynomial.evaluate(points)
    }

    pub fn value_at(&self, x: f64) -> f64 {
        self.polynomial.value_at(x)
    }

    pub fn l2_norm(&self) -> f64 {
        self.polynomial.l2_norm()
    }
}

/// Solves the regularized problem on `grid` with the degree of `penalty`.
pub fn solve(
    samples: &[f64],
    grid: &TrapezoidalGrid,
    lambda: f64,
    penalty: &PenaltySequence,
) -> Result<RegularizedApproximant> {
    check_lambda(lambda)?;
    check_degree(penalty.degree(), grid.len())?;
    let source = analyze(samples, grid, penalty.degree())?;
    RegularizedApproximant::from_source(source, lambda, penalty)
}

/// Hyperinterpolation (`lambda = 0`) of degree `degree`.
pub fn hyperinterpolate(
    samples: &[f64],
    grid: &TrapezoidalGrid,
    degree: usize,
) -> Result<TrigPolynomial> {
    Ok(TrigPolynomial::new(analyze(samples, grid, degree)?))
}

pub fn evaluate(approx: &RegularizedApproximant, points: &[f64]) -> Vec<f64> {
    approx.evaluate(points)
}

/// Regularized barycentric trigonometric interpolation on an odd grid
/// (implicit degree `(N - 1) / 2`):
///
/// ```text
/// t(x) = 1/(1 + lambda tau) * sum (-1)^j f_j csc((x - x_j)/2) / sum (-1)^j csc((x - x_j)/2)
/// ```
///
/// The correction `1 / (1 + lambda tau)` equals the shrinkage of a constant
/// penalty with `beta^2 = tau`, so the result coincides with
/// `solve(.., lambda, constant_penalty(L, tau.sqrt()))`. Points within
/// [`NODE_SNAP_DISTANCE`] of a node return the removable-singularity limit
/// `f_j / (1 + lambda tau)`.
pub fn evaluate_barycentric(
    samples: &[f64],
    grid: &TrapezoidalGrid,
    lambda: f64,
    tau: f64,
    points: &[f64],
) -> Result<Vec<f64>> {
    check_len(grid.len(), samples.len(), "samples")?;
    check_lambda(lambda)?;
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "barycentric tau must be finite and >= 0, got {tau}"
        )));
    }
    let factor = 1.0 / (1.0 + lambda * tau);
    let nodes = grid.nodes();
    Ok(points
        .iter()
        .map(|&x| {
            let x = reduce_angle(x);
            let mut num = 0.0;
            let mut den = 0.0;
            for (j, (&xj, &fj)) in nodes.iter().zip(samples).enumerate() {
                let d = x - xj;
                if circular_distance(d) < NODE_SNAP_DISTANCE {
                    return fj * factor;
                }
                // (-1)^j with 1-based j
                let w = if j % 2 == 0 { -1.0 } else { 1.0 } / (0.5 * d).sin();
                num += w * fj;
                den += w;
            }
            factor * num / den
        })
        .collect())
}

fn circular_distance(d: f64) -> f64 {
    let d = d.abs() % TAU;
    d.min(TAU - d)
}

/// `cond_2` of the diagonal normal-equation matrix `I + lambda B B^T`:
/// `(1 + lambda beta_max^2) / (1 + lambda beta_min^2)`.
pub fn condition_number(lambda: f64, penalty: &PenaltySequence) -> f64 {
    let bmax = penalty.beta_max();
    let bmin = penalty.beta_min();
    (1.0 + lambda * bmax * bmax) / (1.0 + lambda * bmin * bmin)
}

/// `C(lambda, beta) = sqrt(1 + lambda^-2 sum_{l>=1,k} beta^-4)`, the factor in
/// `||p||_{L2} <= sqrt(2 pi) C ||f||_inf`.
pub fn stability_constant(lambda: f64, penalty: &PenaltySequence) -> Result<f64> {
    penalty.ensure_unpenalized_mean()?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::UndefinedBound(format!(
            "stability constant needs lambda > 0, got {lambda}"
        )));
    }
    let mut sum = 0.0;
    for (pos, &b) in penalty.betas().iter().enumerate().skip(1) {
        if b == 0.0 {
            return Err(Error::UndefinedBound(format!(
                "beta{} = 0 makes the stability constant infinite",
                HarmonicIndex::from_position(pos)
            )));
        }
        sum += b.powi(-4);
    }
    Ok((1.0 + sum / (lambda * lambda)).sqrt())
}

/// Upper bound `1 + sum_{l>=1,k} sqrt(2) / (1 + lambda beta^2)` on the
/// uniform operator norm of the regularized approximation.
pub fn lebesgue_bound(lambda: f64, penalty: &PenaltySequence) -> Result<f64> {
    penalty.ensure_unpenalized_mean()?;
    check_lambda(lambda)?;
    Ok(1.0 + penalty.shrinkage(lambda).skip(1).map(|s| SQRT_2 * s).sum::<f64>())
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "lambda must be finite and >= 0, got {lambda}"
        )))
    }
}
