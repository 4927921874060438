use crate::approximant::TrigPolynomial;
use crate::error::{Error, Result};
use crate::grid_basis::{analyze, make_grid, FourierCoefficients, HarmonicIndex};

/// Filter `h(l) = 1` for `l <= n`, `1 - (l - n) / n` for `n < l < 2n`, 0 beyond.
pub fn vp_filter(ell: usize, n: usize) -> f64 {
    if ell <= n {
        1.0
    } else if ell < 2 * n {
        1.0 - (ell - n) as f64 / n as f64
    } else {
        0.0
    }
}

/// Filtered Fourier sum `V_n f` of degree `2n - 1`, with coefficients from an
/// `N'`-point trapezoidal rule. `N' >= 4n + 1` makes the coefficients exact for
/// polynomials of degree `<= 2n`.
pub fn vallee_poussin(f: impl Fn(f64) -> f64, n: usize, quad_points: usize) -> Result<TrigPolynomial> {
    if n == 0 {
        return Err(Error::InvalidArgument("de la Vallee-Poussin order n must be >= 1".into()));
    }
    if quad_points < 4 * n + 1 {
        return Err(Error::Quadrature(format!(
            "{quad_points} points for order {n}; need at least {}",
            4 * n + 1
        )));
    }
    let grid = make_grid(quad_points)?;
    let degree = 2 * n - 1;
    let c = analyze(&grid.sample(f), &grid, degree)?;
    let filtered = c
        .iter()
        .map(|(idx, v): (HarmonicIndex, f64)| vp_filter(idx.ell(), n) * v)
        .collect();
    Ok(TrigPolynomial::new(FourierCoefficients::from_values(degree, quad_points, filtered)?))
}
