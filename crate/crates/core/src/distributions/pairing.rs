use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::fubini::FubiniOptions;
use super::kernels::{kernel_sl3, KernelSpec};
use crate::error::{Error, Result};
use crate::groups::{gamma_invariance_defect, Heis3Element};
use crate::numerics::pv::pv_quadratic;
use crate::numerics::quad::graded_panels;
use crate::numerics::{Field3, GaussRule, Grading, PvOptions};

/// Order of the two outer integrations after the principal value in `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterOrder {
    /// `dz dy dx`.
    YThenX,
    /// `dz dx dy`.
    XThenY,
}

/// Quadrature controls for the triple integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DPairingOptions {
    pub exclusion: f64,
    /// Target nodes per axis for the outer integrals.
    pub resolution: usize,
    /// Gauss order per outer panel.
    pub order: usize,
    /// Cap on every panel width, including the `z` panels away from the poles.
    pub max_panel: f64,
}

impl Default for DPairingOptions {
    fn default() -> Self {
        DPairingOptions { exclusion: 0.05, resolution: 320, order: 20, max_panel: 0.5 }
    }
}

impl DPairingOptions {
    fn fubini(&self) -> FubiniOptions {
        FubiniOptions { exclusion: self.exclusion, resolution: self.resolution }
    }
}

fn panel_width(lo: f64, hi: f64, opts: &DPairingOptions) -> f64 {
    ((hi - lo) * opts.order as f64 / opts.resolution.max(1) as f64).min(opts.max_panel)
}

fn panels(lo: f64, hi: f64, opts: &DPairingOptions) -> Vec<(f64, f64)> {
    let width = panel_width(lo, hi, opts);
    let mut cuts = vec![lo];
    if lo < 0.0 && hi > 0.0 {
        cuts.push(0.0);
    }
    cuts.push(hi);
    let grading = Grading { max_width: width, ratio: 0.5 };
    cuts.windows(2).flat_map(|w| graded_panels(w[0], w[1], &[], &grading)).collect()
}

fn nodes(panels: &[(f64, f64)], rule: &GaussRule) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(panels.len() * rule.nodes.len());
    for &(a, b) in panels {
        let (half, mid) = (0.5 * (b - a), 0.5 * (b + a));
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            out.push((mid + half * x, w * half));
        }
    }
    out
}

/// `∫∫ PV∫ line(x,y)(z) / ((1+x²/4)y² - z²) dz` over the box, outer order as given.
pub(crate) fn triple_pv<L, G>(bounds: [(f64, f64); 3], opts: &DPairingOptions, outer: OuterOrder, line: &L) -> Complex64
where
    L: Fn(f64, f64) -> G + Sync,
    G: Fn(f64) -> Complex64,
{
    let [(xlo, xhi), (ylo, yhi), (zlo, zhi)] = bounds;
    let grading = Grading { max_width: panel_width(zlo, zhi, opts), ratio: 0.5 };
    let pv = PvOptions { exclusion: opts.exclusion, grading };
    let rule = GaussRule::new(opts.order);
    let xs = nodes(&panels(xlo, xhi, opts), &rule);
    let ys = nodes(&panels(ylo, yhi, opts), &rule);
    let inner = |x: f64, y: f64| {
        let a2 = (1.0 + 0.25 * x * x) * y * y;
        pv_quadratic(&line(x, y), a2, zlo, zhi, &pv)
    };
    let (first, second) = match outer {
        OuterOrder::YThenX => (&xs, &ys),
        OuterOrder::XThenY => (&ys, &xs),
    };
    let parts: Vec<Complex64> = first
        .par_iter()
        .map(|&(p, wp)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(q, wq) in second.iter() {
                let v = match outer {
                    OuterOrder::YThenX => inner(p, q),
                    OuterOrder::XThenY => inner(q, p),
                };
                acc += v * wq;
            }
            acc * wp
        })
        .collect();
    parts.iter().sum()
}

/// `∫∫∫ φ(x,y,z) / ((1+x²/4)y² - z²)` with the principal value in `z` innermost.
pub fn d_pairing<F: Field3 + ?Sized>(phi: &F, opts: &DPairingOptions, outer: OuterOrder) -> Result<Complex64> {
    opts.fubini().validate(phi.resolution().as_ref().map(|r| r.as_slice()))?;
    if opts.order < 2 || !(opts.max_panel > 0.0) {
        return Err(Error::config("Gauss order must be at least 2 and max_panel positive"));
    }
    Ok(triple_pv(phi.bounds(), opts, outer, &|x, y| move |z| phi.eval(x, y, z)))
}

/// Both sides of the identity `2D(φ) = π² ∫ φ(x,0,0)/√(1+x²/4) dx`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LemmaEPair {
    pub lhs: f64,
    pub dval: Complex64,
    /// `|2·dval - π²·lhs|`.
    pub residual: f64,
    pub invariance_defect: f64,
}

/// Largest tolerated `|φ∘γ - φ|` on the sampled points.
pub const INVARIANCE_TOLERANCE: f64 = 1e-8;

pub fn lemma_e_pair<F: Field3 + ?Sized>(phi: &F, opts: &DPairingOptions, seed: u64) -> Result<LemmaEPair> {
    let b = phi.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Heis3Element> = (0..1000)
        .map(|_| {
            Heis3Element::new(
                rng.random_range(b[0].0..=b[0].1),
                rng.random_range(b[1].0..=b[1].1),
                rng.random_range(b[2].0..=b[2].1),
            )
        })
        .collect();
    let invariance_defect = gamma_invariance_defect(phi, &points);
    if !(invariance_defect < INVARIANCE_TOLERANCE) {
        return Err(Error::domain(format!(
            "φ must be γ-invariant: sampled |φ∘γ - φ| = {invariance_defect:e} exceeds {INVARIANCE_TOLERANCE:e}"
        )));
    }
    let rule = GaussRule::new(opts.order);
    let lhs: f64 = nodes(&panels(b[0].0, b[0].1, opts), &rule)
        .iter()
        .map(|&(x, w)| phi.eval(x, 0.0, 0.0).re / (1.0 + 0.25 * x * x).sqrt() * w)
        .sum();
    let dval = d_pairing(phi, opts, OuterOrder::YThenX)?;
    Ok(LemmaEPair { lhs, dval, residual: (2.0 * dval - PI * PI * lhs).norm(), invariance_defect })
}

/// Compares `D(⟨ρ_a(·)f, g⟩)` with `∫∫ k(s,t) f(t) conj(g(s)) ds dt`.
///
/// The coordinate element factors as `Z(z - xy/2)·X(x)·Y(y)` where `X`, `Y`, `Z`
/// act by `e^{iaxt}`, translation by `y`, and `e^{iaz}`; hence
/// `⟨ρ_a(x,y,z)f, g⟩ = e^{ia(z - xy/2)} ∫ e^{iaxt} f(t-y) conj(g(t)) dt`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RepresentationPairing {
    pub numeric: Complex64,
    pub predicted: Complex64,
}

/// Gaussian test vectors and truncation used by [`representation_pairing`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairingSetup {
    pub a: f64,
    pub f_center: f64,
    pub g_center: f64,
    pub width: f64,
    /// `|z| ≤ z_window`; the integrand decays like `1/z²`.
    pub z_window: f64,
}

impl Default for PairingSetup {
    fn default() -> Self {
        PairingSetup { a: 2.0, f_center: 1.0, g_center: -1.0, width: 1.0, z_window: 400.0 }
    }
}

pub fn representation_pairing(setup: &PairingSetup, opts: &DPairingOptions) -> Result<RepresentationPairing> {
    let PairingSetup { a, f_center, g_center, width, z_window } = *setup;
    if !(a != 0.0 && width > 0.0 && z_window > 1.0) {
        return Err(Error::config(format!("invalid pairing setup {setup:?}")));
    }
    let f = move |t: f64| (-((t - f_center) / width).powi(2)).exp();
    let g = move |t: f64| (-((t - g_center) / width).powi(2)).exp();
    let reach = 6.0 * width;
    let rule = GaussRule::standard();
    // ∫ e^{iaxt} f(t-y) g(t) dt in closed form: the Gaussians combine around
    // m = (y + f_center + g_center)/2.
    let shift = g_center - f_center;
    let coefficient = |x: f64, y: f64| -> Complex64 {
        let m = 0.5 * (y + f_center + g_center);
        let envelope = (-(y - shift).powi(2) / (2.0 * width * width) - (a * x * width).powi(2) / 8.0).exp();
        Complex64::from_polar(width * (0.5 * PI).sqrt() * envelope, a * x * m)
    };
    // Both envelope factors fall below e^{-40} outside these boxes.
    let yr = (80.0f64).sqrt() * width;
    let xr = (8.0 * 40.0f64).sqrt() / (a.abs() * width);
    let bounds = [(-xr, xr), (shift - yr, shift + yr), (-z_window, z_window)];
    let zw = z_window;
    let numeric = triple_pv(bounds, opts, OuterOrder::YThenX, &|x, y| {
        let c = coefficient(x, y);
        move |z: f64| {
            if z.abs() > zw {
                Complex64::new(0.0, 0.0)
            } else {
                c * Complex64::from_polar(1.0, a * (z - 0.5 * x * y))
            }
        }
    });
    let spec = KernelSpec::sl3(a)?;
    let zero = [Complex64::new(0.0, 0.0)];
    let grading = Grading { max_width: 0.25, ratio: 0.5 };
    let axis = |c: f64| {
        let (lo, hi) = (c - reach, c + reach);
        nodes(&graded_panels(lo.min(-1e-3), hi.max(1e-3), &zero, &grading), rule)
    };
    let (ss, ts) = (axis(g_center), axis(f_center));
    let predicted: f64 = ss
        .par_iter()
        .map(|&(s, ws)| ts.iter().map(|&(t, wt)| kernel_sl3(&spec, s, t) * f(t) * g(s) * wt).sum::<f64>() * ws)
        .sum();
    Ok(RepresentationPairing { numeric, predicted: Complex64::new(predicted, 0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::gamma_symmetrize;
    use crate::numerics::FnField;

    fn bump() -> FnField<impl Fn(f64, f64, f64) -> Complex64> {
        FnField::new(
            |x: f64, y: f64, z: f64| Complex64::new((-(x * x + (y - 0.3).powi(2) + z * z) * 2.0).exp(), 0.0),
            &[(-5.0, 5.0), (-5.0, 5.0), (-5.0, 5.0)],
        )
    }

    #[test]
    fn odd_in_z_vanishes() {
        let phi = FnField::new(
            |x: f64, y: f64, z: f64| Complex64::new(z * (-(x * x + y * y + z * z)).exp(), 0.0),
            &[(-5.0, 5.0), (-5.0, 5.0), (-5.0, 5.0)],
        );
        let v = d_pairing(&phi, &DPairingOptions { resolution: 160, ..Default::default() }, OuterOrder::YThenX).unwrap();
        assert!(v.norm() < 1e-6, "{v}");
    }

    #[test]
    fn lemma_e_rejects_non_invariant_input() {
        let err = lemma_e_pair(&bump(), &DPairingOptions::default(), 1).unwrap_err();
        assert!(err.to_string().contains("γ-invariant"), "{err}");
    }

    #[test]
    fn lemma_e_identity_on_symmetrized_bump() {
        let base = bump();
        let phi = gamma_symmetrize(&base);
        let r = lemma_e_pair(&phi, &DPairingOptions { resolution: 200, ..Default::default() }, 1).unwrap();
        assert!(r.residual < 1e-3 * (r.dval.norm() + 1.0), "{r:?}");
    }
}
