use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// One seeded noisy sampling of a clean signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyRealization {
    pub clean: Vec<f64>,
    pub noisy: Vec<f64>,
    /// `noisy - clean`.
    pub epsilon: Vec<f64>,
    /// Unscaled Gaussian draw; `epsilon = alpha_scale * raw_noise`.
    pub raw_noise: Vec<f64>,
    pub snr_db: f64,
    pub seed: u64,
    pub stream: u64,
    pub alpha_scale: f64,
    pub eps_sup: f64,
    /// `||epsilon||_{2,t_N} = ((2 pi / N) sum epsilon_j^2)^(1/2)`.
    pub eps_wnorm: f64,
}

/// Standard normal draws from ChaCha8 seeded with `seed`, on stream `stream`.
pub fn gaussian_noise(len: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..len).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Adds Gaussian noise scaled so that `10 log10(P_signal / (alpha P_noise)) = snr_db`,
/// with `P_signal` the RMS of `clean` and `P_noise` the sample standard
/// deviation (divisor `N - 1`) of the raw draw.
///
/// This is ten times the log of an amplitude ratio rather than the more common
/// `20 log10`: at 20 dB the noise standard deviation is a hundredth of the
/// signal RMS.
pub fn add_noise_snr(clean: &[f64], snr_db: f64, seed: u64) -> Result<NoisyRealization> {
    add_noise_snr_stream(clean, snr_db, seed, 0)
}

pub fn add_noise_snr_stream(clean: &[f64], snr_db: f64, seed: u64, stream: u64) -> Result<NoisyRealization> {
    let raw = gaussian_noise(clean.len(), seed, stream);
    let mut r = scale_noise(clean, &raw, snr_db)?;
    r.seed = seed;
    r.stream = stream;
    Ok(r)
}

/// Applies the SNR scaling to a given raw noise vector (replaying a stored realization).
pub fn scale_noise(clean: &[f64], raw: &[f64], snr_db: f64) -> Result<NoisyRealization> {
    if raw.len() != clean.len() {
        return Err(Error::DimensionMismatch {
            expected: clean.len(),
            actual: raw.len(),
            context: "raw noise",
        });
    }
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::UndefinedSnr(format!("SNR of {snr_db} dB")));
    }
    if clean.len() < 2 {
        return Err(Error::UndefinedSnr("need at least two samples".into()));
    }
    let n = clean.len() as f64;
    let p_signal = (clean.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    if !(p_signal > 0.0) {
        return Err(Error::UndefinedSnr("clean signal is identically zero".into()));
    }
    let mean = raw.iter().sum::<f64>() / n;
    let p_noise = (raw.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    if !(p_noise > 0.0) {
        return Err(Error::UndefinedSnr("raw noise has zero spread".into()));
    }
    let alpha = p_signal / (p_noise * 10f64.powf(snr_db / 10.0));
    let epsilon: Vec<f64> = raw.iter().map(|r| alpha * r).collect();
    let noisy = clean.iter().zip(&epsilon).map(|(c, e)| c + e).collect();
    let eps_sup = epsilon.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let eps_wnorm = (TAU / n * epsilon.iter().map(|e| e * e).sum::<f64>()).sqrt();
    Ok(NoisyRealization {
        clean: clean.to_vec(),
        noisy,
        epsilon,
        raw_noise: raw.to_vec(),
        snr_db,
        seed: 0,
        stream: 0,
        alpha_scale: alpha,
        eps_sup,
        eps_wnorm,
    })
}
