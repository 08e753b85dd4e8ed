use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::pv::pv_quadratic;
use crate::numerics::{Field2, GaussRule, Grading, PvOptions};

/// Quadrature controls for iterated principal-value integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FubiniOptions {
    /// Largest exclusion radius of the ladder `ε, ε/2, ε/4`.
    pub exclusion: f64,
    /// Target number of quadrature nodes per axis.
    pub resolution: usize,
}

impl Default for FubiniOptions {
    fn default() -> Self {
        FubiniOptions { exclusion: 0.05, resolution: 2048 }
    }
}

impl FubiniOptions {
    /// Panel width giving about `resolution` nodes across `[lo, hi]`.
    pub(crate) fn grading(&self, lo: f64, hi: f64) -> Grading {
        let order = GaussRule::standard().nodes.len() as f64;
        let width = ((hi - lo) * order / self.resolution.max(1) as f64).min(0.5);
        Grading { max_width: width, ratio: 0.5 }
    }

    pub(crate) fn validate(&self, resolution: Option<&[f64]>) -> Result<()> {
        if !(self.exclusion.is_finite() && self.exclusion > 0.0) {
            return Err(Error::config(format!("exclusion must be positive, got {}", self.exclusion)));
        }
        if self.resolution < 16 {
            return Err(Error::config(format!("resolution {} is too small", self.resolution)));
        }
        if let Some(h) = resolution {
            if let Some(&worst) = h.iter().max_by(|a, b| a.total_cmp(b)) {
                if worst > self.exclusion / 4.0 {
                    return Err(Error::config(format!(
                        "grid spacing {worst} is coarser than exclusion/4 = {}",
                        self.exclusion / 4.0
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The two iterated integrals of `φ(y,z)/(y² - z²)` and their difference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FubiniDefect {
    /// `z` inner, `y` outer.
    pub i: f64,
    /// `y` inner, `z` outer.
    pub j: f64,
    pub defect: f64,
    /// Imaginary parts, nonzero only for complex `φ`.
    pub i_im: f64,
    pub j_im: f64,
}

/// Outer integral over `[lo, hi]` split at 0, with parallel node evaluation.
pub(crate) fn outer_integral(lo: f64, hi: f64, grading: &Grading, f: &(impl Fn(f64) -> Complex64 + Sync)) -> Complex64 {
    let mut cuts = vec![lo];
    if lo < 0.0 && hi > 0.0 {
        cuts.push(0.0);
    }
    cuts.push(hi);
    let rule = GaussRule::standard();
    let mut panels = Vec::new();
    for w in cuts.windows(2) {
        panels.extend(crate::numerics::quad::graded_panels(w[0], w[1], &[], grading));
    }
    let parts: Vec<Complex64> = panels.par_iter().map(|&(a, b)| rule.integrate(a, b, f)).collect();
    parts.iter().sum()
}

/// Iterated principal-value integrals of `φ(y,z)/(y²-z²)` in both orders.
pub fn fubini_defect<F: Field2 + ?Sized>(phi: &F, opts: &FubiniOptions) -> Result<FubiniDefect> {
    opts.validate(phi.resolution().as_ref().map(|r| r.as_slice()))?;
    let [(ylo, yhi), (zlo, zhi)] = phi.bounds();
    let gy = opts.grading(ylo, yhi);
    let gz = opts.grading(zlo, zhi);
    let inner_z = PvOptions { exclusion: opts.exclusion, grading: gz };
    let inner_y = PvOptions { exclusion: opts.exclusion, grading: gy };

    let i = outer_integral(ylo, yhi, &gy, &|y: f64| {
        let g = |z: f64| phi.eval(y, z);
        pv_quadratic(&g, y * y, zlo, zhi, &inner_z)
    });
    let j = outer_integral(zlo, zhi, &gz, &|z: f64| {
        let g = |y: f64| phi.eval(y, z);
        -pv_quadratic(&g, z * z, ylo, yhi, &inner_y)
    });
    Ok(FubiniDefect { i: i.re, j: j.re, defect: i.re - j.re, i_im: i.im, j_im: j.im })
}
