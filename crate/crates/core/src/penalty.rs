//! Penalization sequences `beta(l,k)` defining the rotationally invariant
//! regularizer, and the truncated smoothness norm they induce.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid_basis::{check_len, dimension, FourierCoefficients, HarmonicIndex};

/// Default Laplace exponent `s`.
pub const DEFAULT_EXPONENT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum PenaltyForm {
    /// `beta(l,1) = beta(l,2) = l^s`, the spectrum of `(-Laplacian)^(s/2)`.
    Laplace { exponent: f64 },
    /// `beta(l,k) = tau` for every index, including `l = 0`.
    Constant { tau: f64 },
}

/// Nonnegative, nondecreasing penalization weights for a degree-`L` expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltySequence {
    degree: usize,
    form: PenaltyForm,
    beta: Vec<f64>,
}

impl PenaltySequence {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn form(&self) -> PenaltyForm {
        self.form
    }

    /// Laplace exponent `s`, if this is a Laplace penalty.
    pub fn exponent(&self) -> Option<f64> {
        match self.form {
            PenaltyForm::Laplace { exponent } => Some(exponent),
            PenaltyForm::Constant { .. } => None,
        }
    }

    pub fn is_constant_form(&self) -> bool {
        matches!(self.form, PenaltyForm::Constant { .. })
    }

    pub fn beta(&self, idx: HarmonicIndex) -> f64 {
        self.beta[idx.position()]
    }

    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    pub fn beta_max(&self) -> f64 {
        self.beta.iter().copied().fold(0.0, f64::max)
    }

    pub fn beta_min(&self) -> f64 {
        self.beta.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Shrinkage factors `1 / (1 + lambda beta^2)` in flat order.
    pub fn shrinkage(&self, lambda: f64) -> impl Iterator<Item = f64> + '_ {
        self.beta.iter().map(move |b| 1.0 / (1.0 + lambda * b * b))
    }

    /// Error-bound and parameter-choice code assumes the mean is never penalized.
    pub fn ensure_unpenalized_mean(&self) -> Result<()> {
        if self.beta[0] == 0.0 {
            Ok(())
        } else {
            Err(Error::ZeroModePenalized)
        }
    }
}

/// `beta(l,1) = beta(l,2) = l^s` for `l = 0..=degree`.
pub fn laplace_penalty(degree: usize, exponent: f64) -> Result<PenaltySequence> {
    if !(exponent > 0.0 && exponent.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Laplace exponent s must be a positive finite number, got {exponent}"
        )));
    }
    let beta = HarmonicIndex::all(degree)
        .map(|i| if i.ell() == 0 { 0.0 } else { (i.ell() as f64).powf(exponent) })
        .collect();
    Ok(PenaltySequence {
        degree,
        form: PenaltyForm::Laplace { exponent },
        beta,
    })
}

/// Constant weights `beta = tau` on every index (the mean included).
///
/// Only the barycentric evaluator and the plain solver accept this form.
pub fn constant_penalty(degree: usize, tau: f64) -> Result<PenaltySequence> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "constant penalty tau must be finite and >= 0, got {tau}"
        )));
    }
    Ok(PenaltySequence {
        degree,
        form: PenaltyForm::Constant { tau },
        beta: vec![tau; dimension(degree)],
    })
}

/// Truncated smoothness norm `(sum beta^2 c^2)^(1/2)` for the index function `phi(t) = t^(1/2)`.
pub fn sobolev_norm_truncated(
    coeffs: &FourierCoefficients,
    penalty: &PenaltySequence,
) -> Result<f64> {
    check_len(penalty.degree(), coeffs.degree(), "penalty degree vs coefficient degree")?;
    Ok(coeffs
        .values()
        .iter()
        .zip(penalty.betas())
        .map(|(c, b)| (b * c).powi(2))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_basis::{analyze, make_grid};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn laplace_sequences() {
        assert_eq!(laplace_penalty(3, 1.0).unwrap().betas(), &[0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0]);
        assert_eq!(laplace_penalty(2, 2.0).unwrap().betas(), &[0.0, 1.0, 1.0, 4.0, 4.0]);
        assert!(laplace_penalty(2, 0.0).is_err());
        assert!(laplace_penalty(2, -1.0).is_err());
        assert!(laplace_penalty(2, f64::NAN).is_err());
    }

    #[test]
    fn constant_sequences() {
        let p = constant_penalty(2, 2.0).unwrap();
        assert_eq!(p.betas(), &[2.0; 5]);
        assert!(p.is_constant_form());
        assert!(p.ensure_unpenalized_mean().is_err());
        assert_eq!(constant_penalty(2, 0.0).unwrap().betas(), &[0.0; 5]);
        assert!(constant_penalty(2, -1.0).is_err());
    }

    #[test]
    fn sobolev_norm_examples() {
        let g = make_grid(5).unwrap();
        let p = laplace_penalty(2, 1.0).unwrap();
        let c = analyze(&g.sample(f64::cos), &g, 2).unwrap();
        assert_abs_diff_eq!(sobolev_norm_truncated(&c, &p).unwrap(), PI.sqrt(), epsilon = 1e-13);

        let c = analyze(&[4.0; 5], &g, 2).unwrap();
        assert!(sobolev_norm_truncated(&c, &p).unwrap() < 1e-13);

        let zero = FourierCoefficients::zeros(2, 5);
        assert_eq!(sobolev_norm_truncated(&zero, &p).unwrap(), 0.0);

        let p3 = laplace_penalty(3, 1.0).unwrap();
        assert!(matches!(
            sobolev_norm_truncated(&zero, &p3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn laplace_strictly_increasing_beyond_mean(degree in 1usize..40, s in 0.05f64..4.0) {
            let p = laplace_penalty(degree, s).unwrap();
            for ell in 1..degree {
                let a = p.beta(HarmonicIndex::new(ell, 2).unwrap());
                let b = p.beta(HarmonicIndex::new(ell + 1, 1).unwrap());
                prop_assert!(b > a);
                prop_assert_eq!(a, p.beta(HarmonicIndex::new(ell, 1).unwrap()));
            }
        }

        #[test]
        fn sobolev_norm_nondecreasing_in_degree(shift in -2.0f64..2.0, s in 0.5f64..2.0) {
            let grid = make_grid(41).unwrap();
            let samples = grid.sample(|x| (x + shift).cos().exp() + (3.0 * x).sin());
            let mut last = 0.0;
            for degree in 0..=20 {
                let c = analyze(&samples, &grid, degree).unwrap();
                let norm = sobolev_norm_truncated(&c, &laplace_penalty(degree, s).unwrap()).unwrap();
                prop_assert!(norm >= last);
                last = norm;
            }
        }
    }
}
