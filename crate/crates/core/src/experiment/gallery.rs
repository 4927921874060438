use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid_basis::reduce_angle;

/// Built-in 2 pi-periodic test signals.
///
/// `square = sign(sin x)` (0 at the jumps), `sawtooth = x / pi` on `[-pi, pi)`,
/// `triangle = (2 / pi) asin(sin x)`; all three have unit amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GalleryFunction {
    /// `exp(cos x)`
    F1,
    /// `exp(cos x) + sin 30x`
    F2,
    Sine,
    Square,
    Sawtooth,
    Triangle,
}

impl GalleryFunction {
    pub const ALL: [GalleryFunction; 6] = [
        GalleryFunction::F1,
        GalleryFunction::F2,
        GalleryFunction::Sine,
        GalleryFunction::Square,
        GalleryFunction::Sawtooth,
        GalleryFunction::Triangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GalleryFunction::F1 => "f1",
            GalleryFunction::F2 => "f2",
            GalleryFunction::Sine => "sine",
            GalleryFunction::Square => "square",
            GalleryFunction::Sawtooth => "sawtooth",
            GalleryFunction::Triangle => "triangle",
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            GalleryFunction::F1 => x.cos().exp(),
            GalleryFunction::F2 => x.cos().exp() + (30.0 * x).sin(),
            GalleryFunction::Sine => x.sin(),
            GalleryFunction::Square => {
                let s = x.sin();
                if s > 0.0 {
                    1.0
                } else if s < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            GalleryFunction::Sawtooth => reduce_angle(x) / PI,
            GalleryFunction::Triangle => 2.0 / PI * x.sin().asin(),
        }
    }
}

impl fmt::Display for GalleryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GalleryFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        GalleryFunction::ALL
            .into_iter()
            .find(|g| g.name() == lower)
            .ok_or_else(|| Error::UnknownFunction {
                name: s.to_string(),
                choices: GalleryFunction::ALL.map(GalleryFunction::name).join(", "),
            })
    }
}

pub fn gallery(name: &str) -> Result<GalleryFunction> {
    name.parse()
}
