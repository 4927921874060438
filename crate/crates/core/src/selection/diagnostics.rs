//! Closed-form residual, penalty and curvature diagnostics as functions of `lambda`.

use crate::approximant::check_lambda;
use crate::error::{Error, Result};
use crate::grid_basis::{analyze, check_degree, BasisTable, FourierCoefficients, TrapezoidalGrid};
use crate::penalty::PenaltySequence;

// Relative energy below which the l >= 1 part is treated as rounding noise.
const OSCILLATION_FLOOR: f64 = 1e-26;

/// Squared coefficients and penalties of one data vector, from which every
/// `lambda`-dependent diagnostic follows in `O(L)`.
#[derive(Debug, Clone)]
pub struct SpectralProfile {
    coeffs: FourierCoefficients,
    c2: Vec<f64>,
    b2: Vec<f64>,
    projection_residual: f64,
    centered_norm: f64,
    mean: f64,
}

impl SpectralProfile {
    pub fn new(samples: &[f64], grid: &TrapezoidalGrid, penalty: &PenaltySequence) -> Result<Self> {
        penalty.ensure_unpenalized_mean()?;
        check_degree(penalty.degree(), grid.len())?;
        let coeffs = analyze(samples, grid, penalty.degree())?;
        let projection_residual = projection_residual(samples, grid, &coeffs)?;
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let centered: Vec<f64> = samples.iter().map(|f| f - mean).collect();
        let centered_norm = grid.weighted_norm(&centered)?;
        Ok(Self {
            c2: coeffs.values().iter().map(|c| c * c).collect(),
            b2: penalty.betas().iter().map(|b| b * b).collect(),
            coeffs,
            projection_residual,
            centered_norm,
            mean,
        })
    }

    pub fn coefficients(&self) -> &FourierCoefficients {
        &self.coeffs
    }

    /// `||L_L f - f||_{2,t_N}`; zero up to rounding when `N = 2L + 1`.
    pub fn projection_residual(&self) -> f64 {
        self.projection_residual
    }

    /// `||f - sigma||_{2,t_N}` with `sigma` the node mean.
    pub fn centered_norm(&self) -> f64 {
        self.centered_norm
    }

    pub fn node_mean(&self) -> f64 {
        self.mean
    }

    /// True when the `l >= 1` coefficients carry more than rounding-level energy.
    pub fn has_oscillation(&self) -> bool {
        let tail: f64 = self.c2[1..].iter().sum();
        tail > OSCILLATION_FLOOR * (tail + self.c2[0])
    }

    /// `J(lambda)`, the squared weighted residual at the nodes.
    pub fn j(&self, lambda: f64) -> f64 {
        self.terms(lambda, |lb2, _, c2| {
            let r = lb2 / (1.0 + lb2);
            r * r * c2
        }) + self.projection_residual.powi(2)
    }

    /// `K(lambda) = sum beta^2 c^2 / (1 + lambda beta^2)^2`.
    pub fn k(&self, lambda: f64) -> f64 {
        self.terms(lambda, |lb2, b2, c2| b2 * c2 / (1.0 + lb2).powi(2))
    }

    /// `J'(lambda) = sum 2 lambda beta^4 c^2 / (1 + lambda beta^2)^3`.
    pub fn j_prime(&self, lambda: f64) -> f64 {
        self.terms(lambda, |lb2, b2, c2| 2.0 * lambda * b2 * b2 * c2 / (1.0 + lb2).powi(3))
    }

    /// `K'(lambda) = -sum 2 beta^4 c^2 / (1 + lambda beta^2)^3`.
    pub fn k_prime(&self, lambda: f64) -> f64 {
        -self.terms(lambda, |lb2, b2, c2| 2.0 * b2 * b2 * c2 / (1.0 + lb2).powi(3))
    }

    /// Signed curvature of the log-log L-curve at `lambda`.
    pub fn curvature(&self, lambda: f64) -> Result<f64> {
        if !self.has_oscillation() {
            return Err(Error::CurvatureUndefined("data has no oscillating component".into()));
        }
        lcurve_curvature(self.j(lambda), self.k(lambda), self.k_prime(lambda), lambda)
    }

    fn terms(&self, lambda: f64, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
        self.b2
            .iter()
            .zip(&self.c2)
            .map(|(&b2, &c2)| f(lambda * b2, b2, c2))
            .sum()
    }
}

fn projection_residual(samples: &[f64], grid: &TrapezoidalGrid, coeffs: &FourierCoefficients) -> Result<f64> {
    if coeffs.values().len() == grid.len() {
        return Ok(0.0);
    }
    let fitted = BasisTable::new(grid.nodes(), coeffs.degree()).synthesize(coeffs.values());
    let diff: Vec<f64> = fitted.iter().zip(samples).map(|(p, f)| p - f).collect();
    grid.weighted_norm(&diff)
}

/// `J(lambda) = (2 pi / N) sum_j (p(x_j) - f(x_j))^2`, summed at the nodes.
pub fn residual_j(
    samples: &[f64],
    grid: &TrapezoidalGrid,
    penalty: &PenaltySequence,
    lambda: f64,
) -> Result<f64> {
    check_lambda(lambda)?;
    check_degree(penalty.degree(), grid.len())?;
    let coeffs = analyze(samples, grid, penalty.degree())?;
    let table = BasisTable::new(grid.nodes(), penalty.degree());
    // p - f = (p - L_L f) + (L_L f - f), avoiding the cancellation in p - f for small lambda
    let damped: Vec<f64> = coeffs
        .values()
        .iter()
        .zip(penalty.betas())
        .map(|(c, b)| {
            let lb2 = lambda * b * b;
            -lb2 / (1.0 + lb2) * c
        })
        .collect();
    let shrink_part = table.synthesize(&damped);
    let projection = table.synthesize(coeffs.values());
    let diff: Vec<f64> = shrink_part
        .iter()
        .zip(projection.iter().zip(samples))
        .map(|(d, (p, f))| d + (p - f))
        .collect();
    Ok(grid.weighted_norm(&diff)?.powi(2))
}

pub fn penalty_k(samples: &[f64], grid: &TrapezoidalGrid, penalty: &PenaltySequence, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(SpectralProfile::new(samples, grid, penalty)?.k(lambda))
}

pub fn residual_j_prime(
    samples: &[f64],
    grid: &TrapezoidalGrid,
    penalty: &PenaltySequence,
    lambda: f64,
) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(SpectralProfile::new(samples, grid, penalty)?.j_prime(lambda))
}

/// Curvature of `(log rho, log eta)` parametrized by `lambda`, given `rho = J`,
/// `eta = K` and `eta' = K'` (the identity `rho' = -lambda eta'` supplies the rest):
///
/// ```text
/// kappa = (rho eta / |eta'|) (lambda eta' rho + rho eta + lambda^2 eta' eta) / (lambda^2 eta^2 + rho^2)^(3/2)
/// ```
///
/// The sign follows `rho_hat' eta_hat'' - eta_hat' rho_hat''`, so the corner of a
/// typical L-curve has negative curvature; selection uses `|kappa|`.
pub fn lcurve_curvature(rho: f64, eta: f64, eta_prime: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(eta > 0.0) {
        return Err(Error::CurvatureUndefined(format!(
            "penalty term K = {eta} must be positive (no oscillating component in the data)"
        )));
    }
    if !(rho > 0.0) {
        return Err(Error::CurvatureUndefined(format!("residual J = {rho} must be positive")));
    }
    if !(eta_prime < 0.0) {
        return Err(Error::CurvatureUndefined(format!("K' = {eta_prime} must be negative")));
    }
    let num = lambda * eta_prime * rho + rho * eta + lambda * lambda * eta_prime * eta;
    let den = (lambda * lambda * eta * eta + rho * rho).powf(1.5);
    Ok(rho * eta / eta_prime.abs() * num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_basis::make_grid;
    use crate::penalty::{constant_penalty, laplace_penalty};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cos_profile() -> (TrapezoidalGrid, Vec<f64>, PenaltySequence) {
        let g = make_grid(5).unwrap();
        let f = g.sample(f64::cos);
        (g, f, laplace_penalty(2, 1.0).unwrap())
    }

    // Curvature of (log J, log K) by central differences in lambda.
    fn fd_curvature(p: &SpectralProfile, lambda: f64) -> f64 {
        let h = 1e-3 * lambda;
        let x = |l: f64| p.j(l).ln();
        let y = |l: f64| p.k(l).ln();
        let x1 = (x(lambda + h) - x(lambda - h)) / (2.0 * h);
        let y1 = (y(lambda + h) - y(lambda - h)) / (2.0 * h);
        let x2 = (x(lambda + h) - 2.0 * x(lambda) + x(lambda - h)) / (h * h);
        let y2 = (y(lambda + h) - 2.0 * y(lambda) + y(lambda - h)) / (h * h);
        (x1 * y2 - y1 * x2) / (x1 * x1 + y1 * y1).powf(1.5)
    }

    #[test]
    fn single_mode_values() {
        let (g, f, p) = cos_profile();
        assert_abs_diff_eq!(residual_j(&f, &g, &p, 1.0).unwrap(), PI / 4.0, epsilon = 1e-13);
        assert!(residual_j(&f, &g, &p, 0.0).unwrap() < 1e-28);
        assert_abs_diff_eq!(residual_j(&f, &g, &p, 1e12).unwrap(), PI, epsilon = 1e-10);
        assert_abs_diff_eq!(penalty_k(&f, &g, &p, 1.0).unwrap(), PI / 4.0, epsilon = 1e-13);
        assert_abs_diff_eq!(penalty_k(&f, &g, &p, 0.0).unwrap(), PI, epsilon = 1e-13);
        assert_abs_diff_eq!(residual_j_prime(&f, &g, &p, 1.0).unwrap(), PI / 4.0, epsilon = 1e-13);
        assert_eq!(residual_j_prime(&f, &g, &p, 0.0).unwrap(), 0.0);
        let c = g.sample(|_| 2.5);
        assert!(penalty_k(&c, &g, &p, 0.3).unwrap().abs() < 1e-28);
        assert!(residual_j_prime(&c, &g, &p, 0.3).unwrap().abs() < 1e-28);
    }

    #[test]
    fn single_mode_curvature() {
        let (g, f, p) = cos_profile();
        let prof = SpectralProfile::new(&f, &g, &p).unwrap();
        let kappa = prof.curvature(1.0).unwrap();
        assert_abs_diff_eq!(kappa, -(2f64.sqrt()) / 4.0, epsilon = 1e-12);
        assert!((kappa - fd_curvature(&prof, 1.0)).abs() <= 1e-5 * kappa.abs());
        let direct = lcurve_curvature(PI / 4.0, PI / 4.0, -PI / 4.0, 1.0).unwrap();
        assert_abs_diff_eq!(direct, -0.353_553_39, epsilon = 1e-8);
    }

    #[test]
    fn curvature_needs_oscillation() {
        let g = make_grid(5).unwrap();
        let p = laplace_penalty(2, 1.0).unwrap();
        let prof = SpectralProfile::new(&[1.0; 5], &g, &p).unwrap();
        assert!(!prof.has_oscillation());
        assert!(matches!(prof.curvature(0.5), Err(Error::CurvatureUndefined(_))));
        assert!(lcurve_curvature(1.0, 0.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn penalized_mean_is_refused() {
        let g = make_grid(5).unwrap();
        assert!(matches!(
            SpectralProfile::new(&[1.0; 5], &g, &constant_penalty(2, 1.0).unwrap()),
            Err(Error::ZeroModePenalized)
        ));
    }

    #[test]
    fn spectral_and_nodal_residuals_agree_on_overdetermined_grids() {
        let g = make_grid(41).unwrap();
        let f = g.sample(|x| (x.cos()).exp() + 0.2 * (17.0 * x).sin() + 0.1 * (x * 3.0).cos().signum());
        let p = laplace_penalty(9, 1.5).unwrap();
        let prof = SpectralProfile::new(&f, &g, &p).unwrap();
        assert!(prof.projection_residual() > 0.1);
        for lambda in [0.0, 1e-6, 1e-3, 0.1, 10.0] {
            let a = residual_j(&f, &g, &p, lambda).unwrap();
            let b = prof.j(lambda);
            assert!((a - b).abs() <= 1e-12 * b, "{lambda}: {a} vs {b}");
        }
        assert!(prof.centered_norm() >= prof.projection_residual());
    }

    fn noisy_profile(seed_shift: f64, n: usize, degree: usize, s: f64) -> SpectralProfile {
        let g = make_grid(n).unwrap();
        let f = g.sample(|x| (x.cos()).exp() + 0.05 * ((37.0 * x + seed_shift).sin() + (11.0 * x).cos()));
        SpectralProfile::new(&f, &g, &laplace_penalty(degree, s).unwrap()).unwrap()
    }

    #[test]
    fn j_prime_matches_finite_differences() {
        let prof = noisy_profile(0.4, 101, 50, 1.0);
        for i in 0..50 {
            let lambda = 10f64.powf(-6.0 + 6.0 * i as f64 / 49.0);
            let h = 1e-4 * lambda;
            let fd = (prof.j(lambda + h) - prof.j(lambda - h)) / (2.0 * h);
            let exact = prof.j_prime(lambda);
            assert!((fd - exact).abs() <= 1e-6 * exact, "{lambda}: {fd} vs {exact}");
            let identity = -lambda * prof.k_prime(lambda);
            assert!((identity - exact).abs() <= 1e-12 * exact);
        }
    }

    proptest! {
        #[test]
        fn curvature_matches_finite_differences(shift in 0.0f64..3.0, loglam in -4.0f64..0.5, s in 0.5f64..2.0) {
            let prof = noisy_profile(shift, 41, 20, s);
            let lambda = 10f64.powf(loglam);
            let kappa = prof.curvature(lambda).unwrap();
            let fd = fd_curvature(&prof, lambda);
            prop_assert!((kappa - fd).abs() <= 1e-4 * kappa.abs().max(1e-3), "{} vs {}", kappa, fd);
        }

        #[test]
        fn j_increases_and_k_decreases(shift in 0.0f64..3.0, s in 0.5f64..2.0) {
            let prof = noisy_profile(shift, 31, 15, s);
            let lambdas = crate::selection::ParameterGrid::default();
            for w in lambdas.lambdas()[..250].windows(2) {
                prop_assert!(prof.j(w[1]) < prof.j(w[0]));
                prop_assert!(prof.k(w[1]) > prof.k(w[0]));
            }
        }
    }
}
