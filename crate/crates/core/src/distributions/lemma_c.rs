use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::fubini::outer_integral;
use crate::error::{Error, Result};
use crate::numerics::pv::pv_quadratic;
use crate::numerics::quad::graded_panels;
use crate::numerics::{bessel_j0, GaussRule, Grading, PvOptions};

/// Factor multiplying `J₀` in the closed form, fitted against
/// [`lemma_c_khat_numeric`] among [`NORMALIZATION_CANDIDATES`].
pub const LEMMA_C_NORMALIZATION: f64 = PI * PI;

pub const NORMALIZATION_CANDIDATES: [f64; 4] = [1.0, 1.0 / PI, PI, PI * PI];

/// `K̂(t,u) = c·J₀(√(u²-t²))` for `u² > t²` and `0` for `u² < t²`, with
/// `c = LEMMA_C_NORMALIZATION` and the transform `∫∫ e^{i(ty+uz)} K dy dz`.
pub fn lemma_c_khat(t: f64, u: f64) -> Result<f64> {
    if !(t.is_finite() && u.is_finite()) {
        return Err(Error::domain("t and u must be finite"));
    }
    let gap = u * u - t * t;
    if gap.abs() < 1e-12 {
        return Err(Error::domain(format!("(t, u) = ({t}, {u}) lies on the boundary u² = t²")));
    }
    if gap < 0.0 {
        return Ok(0.0);
    }
    Ok(LEMMA_C_NORMALIZATION * bessel_j0(gap.sqrt())?)
}

/// Which variable the principal value is taken in first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerVariable {
    Y,
    Z,
}

/// Truncation window, damping envelope `e^{-δ(y²+z²)}` and quadrature settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LemmaCGrid {
    pub window: f64,
    pub damping: f64,
    pub exclusion: f64,
    pub panel_width: f64,
}

impl Default for LemmaCGrid {
    /// `e^{-δW²} ≈ 1.5e-8` at the window edge.
    fn default() -> Self {
        LemmaCGrid { window: 60.0, damping: 0.005, exclusion: 0.05, panel_width: 0.5 }
    }
}

/// `∫∫ e^{i(ty+uz)} e^{-δ(y²+z²)} / (1+y²-z²)` over the window, with the
/// principal value taken in `inner` first.
pub fn lemma_c_khat_numeric(t: f64, u: f64, grid: &LemmaCGrid, inner: InnerVariable) -> Result<f64> {
    if !(grid.window > 1.0 && grid.damping >= 0.0 && grid.exclusion > 0.0 && grid.panel_width > 0.0) {
        return Err(Error::config(format!("invalid K̂ quadrature grid {grid:?}")));
    }
    let w = grid.window;
    let delta = grid.damping;
    let grading = Grading { max_width: grid.panel_width, ratio: 0.5 };
    let pv = PvOptions { exclusion: grid.exclusion, grading };
    let factor = |v: f64, freq: f64| {
        if v.abs() > w {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar((-delta * v * v).exp(), freq * v)
        }
    };
    let value = match inner {
        InnerVariable::Z => outer_integral(-w, w, &grading, &|y: f64| {
            let g = |z: f64| factor(z, u);
            factor(y, t) * pv_quadratic(&g, 1.0 + y * y, -w, w, &pv)
        }),
        InnerVariable::Y => {
            // The inner value is singular where the poles ±√(z²-1) merge at z = ±1.
            let inner = |z: f64| {
                let g = |y: f64| factor(y, t);
                // (z-1)(z+1) stays nonzero at nodes next to ±1 where z*z - 1 rounds to 0.
                -factor(z, u) * pv_quadratic(&g, (z - 1.0) * (z + 1.0), -w, w, &pv)
            };
            let sing = [Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)];
            let rule = GaussRule::standard();
            let panels = graded_panels(-w, w, &sing, &grading);
            panels.par_iter().map(|&(a, b)| rule.integrate(a, b, &inner)).collect::<Vec<_>>().iter().sum()
        }
    };
    Ok(value.re)
}

/// Least-squares factor `c` in `numeric ≈ c·J₀(u)` and the nearest candidate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizationFit {
    pub fitted: f64,
    pub chosen: f64,
    pub relative_residuals: Vec<f64>,
}

pub fn fit_normalization(samples: &[(f64, f64)]) -> Result<NormalizationFit> {
    let mut num = 0.0;
    let mut den = 0.0;
    let mut basis = Vec::with_capacity(samples.len());
    for &(u, value) in samples {
        let j = bessel_j0(u)?;
        num += j * value;
        den += j * j;
        basis.push((j, value));
    }
    if den == 0.0 {
        return Err(Error::config("normalization fit needs at least one u with J₀(u) ≠ 0"));
    }
    let fitted = num / den;
    let chosen = NORMALIZATION_CANDIDATES
        .iter()
        .copied()
        .min_by(|a, b| ((a - fitted).abs() / a).total_cmp(&((b - fitted).abs() / b)))
        .expect("candidates are nonempty");
    let relative_residuals = basis.iter().map(|(j, v)| (v - chosen * j).abs() / (chosen * j).abs().max(1e-12)).collect();
    Ok(NormalizationFit { fitted, chosen, relative_residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_branches() {
        assert_eq!(lemma_c_khat(3.0, 1.0).unwrap(), 0.0);
        assert!((lemma_c_khat(0.0, 1e-3).unwrap() - LEMMA_C_NORMALIZATION).abs() < 1e-5);
        assert!(lemma_c_khat(1.0, 1.0).is_err());
        assert!((lemma_c_khat(0.0, 1.0).unwrap() / LEMMA_C_NORMALIZATION - 0.7651976865579666).abs() < 1e-10);
    }

    #[test]
    fn z_inner_matches_closed_form() {
        let v = lemma_c_khat_numeric(0.0, 2.0, &LemmaCGrid::default(), InnerVariable::Z).unwrap();
        let exact = lemma_c_khat(0.0, 2.0).unwrap();
        assert!((v - exact).abs() < 0.02 * exact.abs(), "{v} vs {exact}");
    }

    #[test]
    fn inner_order_does_not_matter() {
        // Reference values from an independent erfcx/Dawson evaluation of the damped integral.
        let grid = LemmaCGrid::default();
        let y = lemma_c_khat_numeric(0.0, 1.0, &grid, InnerVariable::Y).unwrap();
        let z = lemma_c_khat_numeric(0.0, 1.0, &grid, InnerVariable::Z).unwrap();
        assert!((y - 7.557916).abs() < 1e-5, "{y}");
        assert!((y - z).abs() < 1e-5);
    }
}
