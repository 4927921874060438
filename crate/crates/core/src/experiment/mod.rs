//! Noise injection, error metrics, test signals, the de la Vallee-Poussin
//! operator and multi-level sweeps.

mod gallery;
mod metrics;
mod noise;
mod sweep;
mod vallee_poussin;

pub use gallery::{gallery, GalleryFunction};
pub use metrics::{eval_grid, l2_error, uniform_error, ErrorProbe, DEFAULT_EVAL_POINTS};
pub use noise::{add_noise_snr, add_noise_snr_stream, gaussian_noise, scale_noise, NoisyRealization};
pub use sweep::{
    sweep, CurvePoint, StrategyOutcome, SweepConfig, SweepMetadata, SweepReport, SweepRow,
};
pub use vallee_poussin::{vallee_poussin, vp_filter};
