//! Tikhonov-regularized trigonometric approximation on equidistant nodes of
//! the circle, with a posteriori choice of the regularization parameter.
//!
//! On an odd grid of `N` trapezoidal nodes the normal equations are diagonal,
//! so the regularized solution, its residual, penalty, curvature and GCV
//! function all have closed forms in the discrete Fourier coefficients.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approximant;
pub mod error;
pub mod experiment;
pub mod grid_basis;
pub mod penalty;
pub mod selection;

pub use approximant::{
    condition_number, evaluate, evaluate_barycentric, hyperinterpolate, lebesgue_bound, solve,
    stability_constant, RegularizedApproximant, TrigPolynomial,
};
pub use error::{Error, Result};
pub use experiment::{
    add_noise_snr, gallery, l2_error, sweep, uniform_error, vallee_poussin, ErrorProbe,
    GalleryFunction, NoisyRealization, SweepConfig, SweepReport,
};
pub use grid_basis::{
    analyze, discrete_inner, eval_harmonic, make_grid, BasisTable, FourierCoefficients,
    HarmonicIndex, TrapezoidalGrid,
};
pub use penalty::{constant_penalty, laplace_penalty, sobolev_norm_truncated, PenaltySequence};
pub use selection::{
    parameter_grid, select_gcv, select_lcurve, select_morozov, select_oracle, MorozovOptions,
    ParameterGrid, SelectionReport, Strategy,
};
