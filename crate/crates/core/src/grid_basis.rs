//! Equidistant trapezoidal grid on the unit circle, the real orthonormal
//! trigonometric basis, and discrete Fourier analysis of sampled data.
//!
//! Basis functions are indexed by [`HarmonicIndex`] `(ell, k)`:
//!
//! * `Y(0,1)  = 1 / sqrt(2 pi)`
//! * `Y(l,1)  = cos(l x) / sqrt(pi)`
//! * `Y(l,2)  = sin(l x) / sqrt(pi)`
//!
//! and stored in the flat order `(0,1), (1,1), (1,2), ..., (L,1), (L,2)`, so a
//! degree-`L` coefficient vector has `2L + 1` entries.
//!
//! Coefficients are computed by direct summation; for the problem sizes this
//! crate targets (a few hundred nodes) that is fast and keeps every quantity
//! traceable to its defining sum.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;
pub(crate) const INV_SQRT_TAU: f64 = 0.398_942_280_401_432_7;

/// Reduces an angle into `[-pi, pi)`.
pub fn reduce_angle(x: f64) -> f64 {
    if (-PI..PI).contains(&x) {
        return x;
    }
    let r = (x + PI).rem_euclid(TAU) - PI;
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// `N` equidistant nodes `x_j = -pi + 2 pi (j - 1) / N` with uniform weight `2 pi / N`.
///
/// `N` is odd and at least 3.
#[derive(Debug, Clone, PartialEq)]
pub struct TrapezoidalGrid {
    nodes: Vec<f64>,
}

impl TrapezoidalGrid {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < 3 || n_points % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "number of nodes must be odd and >= 3, got {n_points}"
            )));
        }
        let step = TAU / n_points as f64;
        let nodes = (0..n_points).map(|j| -PI + step * j as f64).collect();
        Ok(Self { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Uniform quadrature weight `2 pi / N`.
    pub fn weight(&self) -> f64 {
        TAU / self.nodes.len() as f64
    }

    /// Largest degree `L` with `2L + 1 <= N`.
    pub fn max_degree(&self) -> usize {
        (self.nodes.len() - 1) / 2
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }

    /// Weighted 2-norm `((2 pi / N) sum y_j^2)^(1/2)` of a node vector.
    pub fn weighted_norm(&self, values: &[f64]) -> Result<f64> {
        check_len(self.len(), values.len(), "weighted norm")?;
        Ok((self.weight() * values.iter().map(|v| v * v).sum::<f64>()).sqrt())
    }
}

/// Builds the trapezoidal grid with `n_points` nodes.
pub fn make_grid(n_points: usize) -> Result<TrapezoidalGrid> {
    TrapezoidalGrid::new(n_points)
}

/// Index `(ell, k)` of a real trigonometric basis function; `(0, 2)` does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HarmonicIndex {
    ell: usize,
    k: u8,
}

impl HarmonicIndex {
    pub fn new(ell: usize, k: u8) -> Result<Self> {
        match (ell, k) {
            (0, 1) => Ok(Self { ell, k }),
            (0, _) => Err(Error::InvalidArgument(
                "harmonic index (0, k) only exists for k = 1".into(),
            )),
            (_, 1 | 2) => Ok(Self { ell, k }),
            _ => Err(Error::InvalidArgument(format!(
                "harmonic index k must be 1 or 2, got {k}"
            ))),
        }
    }

    pub fn ell(self) -> usize {
        self.ell
    }

    pub fn k(self) -> u8 {
        self.k
    }

    /// Position in the flat coefficient order.
    pub fn position(self) -> usize {
        if self.ell == 0 {
            0
        } else {
            2 * self.ell - 2 + self.k as usize
        }
    }

    pub fn from_position(pos: usize) -> Self {
        if pos == 0 {
            Self { ell: 0, k: 1 }
        } else {
            Self {
                ell: pos.div_ceil(2),
                k: if pos % 2 == 1 { 1 } else { 2 },
            }
        }
    }

    /// All indices of degree `<= degree`, in flat order.
    pub fn all(degree: usize) -> impl Iterator<Item = HarmonicIndex> {
        (0..dimension(degree)).map(Self::from_position)
    }
}

impl fmt::Display for HarmonicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.ell, self.k)
    }
}

/// Dimension `2L + 1` of the degree-`L` trigonometric polynomial space.
pub fn dimension(degree: usize) -> usize {
    2 * degree + 1
}

/// Value of the normalized basis function `idx` at angle `x`.
pub fn eval_harmonic(idx: HarmonicIndex, x: f64) -> f64 {
    let x = reduce_angle(x);
    match (idx.ell, idx.k) {
        (0, _) => INV_SQRT_TAU,
        (ell, 1) => (ell as f64 * x).cos() * INV_SQRT_PI,
        (ell, _) => (ell as f64 * x).sin() * INV_SQRT_PI,
    }
}

/// Discrete inner product `(2 pi / N) sum_j v_j z_j` on the grid.
pub fn discrete_inner(v: &[f64], z: &[f64], grid: &TrapezoidalGrid) -> Result<f64> {
    check_len(grid.len(), v.len(), "discrete inner product (first argument)")?;
    check_len(grid.len(), z.len(), "discrete inner product (second argument)")?;
    Ok(grid.weight() * v.iter().zip(z).map(|(a, b)| a * b).sum::<f64>())
}

/// Values of all basis functions of degree `<= L` at a fixed set of points,
/// stored row-major (one row of `2L + 1` values per point).
#[derive(Debug, Clone)]
pub struct BasisTable {
    degree: usize,
    n_points: usize,
    values: Vec<f64>,
}

impl BasisTable {
    pub fn new(points: &[f64], degree: usize) -> Self {
        let d = dimension(degree);
        let mut values = Vec::with_capacity(points.len() * d);
        for &x in points {
            let x = reduce_angle(x);
            values.push(INV_SQRT_TAU);
            for ell in 1..=degree {
                let (s, c) = (ell as f64 * x).sin_cos();
                values.push(c * INV_SQRT_PI);
                values.push(s * INV_SQRT_PI);
            }
        }
        Self {
            degree,
            n_points: points.len(),
            values,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let d = dimension(self.degree);
        &self.values[j * d..(j + 1) * d]
    }

    /// Evaluates `sum_i coeffs[i] Y_i` at every point of the table.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        debug_assert_eq!(coeffs.len(), dimension(self.degree));
        (0..self.n_points)
            .map(|j| dot(self.row(j), coeffs))
            .collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coefficients `<f, Y(l,k)>_N` of a degree-`L` expansion, in flat order.
///
/// `n_points` records the size of the quadrature the coefficients came from
/// (the GCV closed form is only valid when it equals `2L + 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCoefficients {
    degree: usize,
    n_points: usize,
    values: Vec<f64>,
}

impl FourierCoefficients {
    pub fn from_values(degree: usize, n_points: usize, values: Vec<f64>) -> Result<Self> {
        check_len(dimension(degree), values.len(), "coefficient vector")?;
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "coefficient {} is not finite",
                HarmonicIndex::from_position(pos)
            )));
        }
        Ok(Self {
            degree,
            n_points,
            values,
        })
    }

    pub fn zeros(degree: usize, n_points: usize) -> Self {
        Self {
            degree,
            n_points,
            values: vec![0.0; dimension(degree)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, idx: HarmonicIndex) -> Option<f64> {
        self.values.get(idx.position()).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (HarmonicIndex, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(pos, &v)| (HarmonicIndex::from_position(pos), v))
    }

    /// `sum c^2`, the squared L2 norm of the expanded polynomial.
    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// True when every coefficient is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// Discrete Fourier analysis `<f, Y(l,k)>_N` for all indices of degree `<= L`.
///
/// Equivalent to `A^T W f` with `A` the basis matrix at the nodes.
pub fn analyze(
    samples: &[f64],
    grid: &TrapezoidalGrid,
    degree: usize,
) -> Result<FourierCoefficients> {
    check_len(grid.len(), samples.len(), "samples")?;
    check_degree(degree, grid.len())?;
    let d = dimension(degree);
    let w = grid.weight();
    let mut values = vec![0.0; d];
    for (&x, &f) in grid.nodes().iter().zip(samples) {
        values[0] += f * INV_SQRT_TAU;
        for ell in 1..=degree {
            let (s, c) = (ell as f64 * x).sin_cos();
            values[2 * ell - 1] += f * c * INV_SQRT_PI;
            values[2 * ell] += f * s * INV_SQRT_PI;
        }
    }
    for v in &mut values {
        *v *= w;
    }
    FourierCoefficients::from_values(degree, grid.len(), values)
}

pub(crate) fn check_degree(degree: usize, n_points: usize) -> Result<()> {
    if dimension(degree) > n_points {
        Err(Error::DegreeTooHigh { degree, n_points })
    } else {
        Ok(())
    }
}

pub(crate) fn check_len(expected: usize, actual: usize, context: &'static str) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            actual,
            context,
        })
    }
}
