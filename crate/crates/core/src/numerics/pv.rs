//! Principal-value quadrature with symmetric exclusion windows around simple poles.

use num_complex::Complex64;

use super::quad::{integrate_graded, richardson_odd, Grading};
use crate::error::{Error, Result};

/// Exclusion and grading parameters shared by the principal-value routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PvOptions {
    pub exclusion: f64,
    pub grading: Grading,
}

impl PvOptions {
    pub fn new(exclusion: f64) -> Self {
        PvOptions { exclusion, grading: Grading::default() }
    }
}

/// `PV ∫_a^b f` with the symmetric window `(p-ε, p+ε)` removed around every pole `p`.
///
/// The windows must not overlap and must stay inside `(a, b)`.
pub fn pv_integral_1d(f: impl Fn(f64) -> Complex64, a: f64, b: f64, poles: &[f64], exclusion: f64) -> Result<Complex64> {
    let poles = validate(a, b, poles, exclusion)?;
    Ok(ladder(&f, a, b, &poles, &PvOptions::new(exclusion), &[], false)[0])
}

/// Richardson extrapolation of [`pv_integral_1d`] over the exclusions `ε, ε/2, ε/4`.
pub fn pv_richardson(f: impl Fn(f64) -> Complex64, a: f64, b: f64, poles: &[f64], exclusion: f64) -> Result<Complex64> {
    let poles = validate(a, b, poles, exclusion)?;
    Ok(richardson_odd(ladder(&f, a, b, &poles, &PvOptions::new(exclusion), &[], false)))
}

fn validate(a: f64, b: f64, poles: &[f64], exclusion: f64) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::domain(format!("invalid interval [{a}, {b}]")));
    }
    if !(exclusion.is_finite() && exclusion > 0.0) {
        return Err(Error::config(format!("exclusion must be positive, got {exclusion}")));
    }
    let mut sorted = poles.to_vec();
    sorted.sort_by(f64::total_cmp);
    for &p in &sorted {
        if !(p > a && p < b) {
            return Err(Error::domain(format!("pole {p} is not strictly inside ({a}, {b})")));
        }
        if exclusion >= (p - a).min(b - p) {
            return Err(Error::config(format!("exclusion {exclusion} reaches the boundary from pole {p}")));
        }
    }
    for w in sorted.windows(2) {
        if exclusion >= 0.5 * (w[1] - w[0]) {
            return Err(Error::config(format!(
                "exclusion windows around poles {} and {} overlap (exclusion {exclusion})",
                w[0], w[1]
            )));
        }
    }
    Ok(sorted)
}

/// `[T(ε), T(ε/2), T(ε/4)]` for sorted poles strictly inside `(a, b)`.
///
/// Each pole owns the window of radius `R = min(half gap, distance to boundary)`.
/// Inside it the paired integrand `f(p+s) + f(p-s)` is integrated over `[ε', R]`;
/// with `shrink` the exclusion is reduced per pole to `ε' = min(ε, R/1024)`, which
/// keeps the fifth-order Richardson remainder `~(ε'/R)⁵` below rounding when poles nearly merge.
pub(crate) fn ladder(
    f: &impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    poles: &[f64],
    opts: &PvOptions,
    extra: &[Complex64],
    shrink: bool,
) -> [Complex64; 3] {
    let g = &opts.grading;
    let mut singular: Vec<Complex64> = poles.iter().map(|&p| Complex64::new(p, 0.0)).collect();
    singular.extend_from_slice(extra);

    let radii: Vec<f64> = poles
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let mut r = (p - a).min(b - p);
            if k > 0 {
                r = r.min(0.5 * (p - poles[k - 1]));
            }
            if k + 1 < poles.len() {
                r = r.min(0.5 * (poles[k + 1] - p));
            }
            r
        })
        .collect();

    let mut base = Complex64::new(0.0, 0.0);
    let mut inner1 = Complex64::new(0.0, 0.0);
    let mut inner2 = Complex64::new(0.0, 0.0);

    // Regular stretches between windows.
    let mut cursor = a;
    for (&p, &r) in poles.iter().zip(&radii) {
        if p - r > cursor {
            base += integrate_graded(f, cursor, p - r, &singular, g);
        }
        cursor = p + r;
    }
    if b > cursor {
        base += integrate_graded(f, cursor, b, &singular, g);
    }

    for (&p, &r) in poles.iter().zip(&radii) {
        let eps = if shrink { opts.exclusion.min(r / 1024.0) } else { opts.exclusion };
        let paired = |s: f64| f(p + s) + f(p - s);
        // Singular points of the paired integrand, in the variable s.
        let mut sing_s: Vec<Complex64> = Vec::with_capacity(2 * singular.len());
        for q in &singular {
            let d = q - p;
            if d.norm() > 0.0 {
                sing_s.push(d);
                sing_s.push(-d);
            }
        }
        base += integrate_graded(&paired, eps, r, &sing_s, g);
        inner1 += integrate_graded(&paired, 0.5 * eps, eps, &sing_s, g);
        inner2 += integrate_graded(&paired, 0.25 * eps, 0.5 * eps, &sing_s, g);
    }
    [base, base + inner1, base + inner1 + inner2]
}

/// `PV ∫_lo^hi g(z) / (a2 - z²) dz`, extrapolated over the exclusion ladder.
///
/// For `a2 > 0` the poles sit at `±√a2`; the interval is widened to contain them
/// with a margin, so `g` must vanish outside `[lo, hi]`. For `a2 ≤ 0` there are
/// no real poles and the panels are graded toward `±i√(-a2)`.
pub(crate) fn pv_quadratic(g: &impl Fn(f64) -> Complex64, a2: f64, lo: f64, hi: f64, opts: &PvOptions) -> Complex64 {
    let f = |z: f64| g(z) / (a2 - z * z);
    if a2 > 0.0 {
        let root = a2.sqrt();
        let margin = 0.25 * (hi - lo).max(root);
        let lo = lo.min(-root - margin);
        let hi = hi.max(root + margin);
        richardson_odd(ladder(&f, lo, hi, &[-root, root], opts, &[], true))
    } else {
        let im = (-a2).sqrt();
        let sing = [Complex64::new(0.0, im), Complex64::new(0.0, -im)];
        integrate_graded(&f, lo, hi, &sing, &opts.grading)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn reciprocal_is_zero() {
        let v = pv_integral_1d(|t| c(1.0 / t), -1.0, 1.0, &[0.0], 1e-2).unwrap();
        assert!(v.norm() < 1e-13);
    }

    #[test]
    fn shifted_reciprocal_gives_minus_log_three() {
        let v = pv_richardson(|t| c(1.0 / (t - 1.0)), -2.0, 2.0, &[1.0], 0.1).unwrap();
        assert!((v.re + 3f64.ln()).abs() < 1e-12, "{v}");
        let raw = pv_integral_1d(|t| c(1.0 / (t - 1.0)), -2.0, 2.0, &[1.0], 0.1).unwrap();
        assert!((raw.re + 3f64.ln()).abs() < 1e-12, "{raw}");
    }

    #[test]
    fn odd_integrand_with_symmetric_poles() {
        let v = pv_integral_1d(|t| c(t / (t * t - 1.0)), -2.0, 2.0, &[-1.0, 1.0], 0.05).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn richardson_recovers_smooth_numerator() {
        // PV ∫_{-1}^{3} e^t/(t-1) dt = e·(Ei(2) - Ei(-2)).
        let exact = std::f64::consts::E * (4.954_234_356_001_89 - (-0.04890051070806112));
        let f = |t: f64| c(t.exp() / (t - 1.0));
        let raw = pv_integral_1d(f, -1.0, 3.0, &[1.0], 0.2).unwrap();
        let ext = pv_richardson(f, -1.0, 3.0, &[1.0], 0.2).unwrap();
        assert!((raw.re - exact).abs() > 1e-2);
        assert!((ext.re - exact).abs() < 1e-6, "{} vs {exact}", ext.re);
    }

    #[test]
    fn pole_on_boundary_is_domain_error() {
        let r = pv_integral_1d(|t| c(1.0 / t), 0.0, 1.0, &[0.0], 1e-2);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn overlapping_windows_are_config_error() {
        let r = pv_integral_1d(|t| c(1.0 / (t * t - 0.01)), -1.0, 1.0, &[-0.1, 0.1], 0.2);
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn quadratic_helper_matches_closed_form() {
        // PV ∫_{-L}^{L} dz/(A²-z²) = (1/A) ln((L+A)/(L-A)); g is the indicator of [-L, L].
        let (a, l) = (0.7_f64, 2.0_f64);
        let g = |z: f64| if z.abs() <= l { c(1.0) } else { c(0.0) };
        let v = pv_quadratic(&g, a * a, -l, l, &PvOptions::new(0.01));
        let exact = ((l + a) / (l - a)).ln() / a;
        assert!((v.re - exact).abs() < 1e-9, "{} vs {exact}", v.re);
    }

    #[test]
    fn quadratic_helper_without_real_poles() {
        // ∫_{-1}^{1} dz/(-b²-z²) = -(2/b) atan(1/b)
        let b = 1e-3_f64;
        let v = pv_quadratic(&|_z: f64| c(1.0), -b * b, -1.0, 1.0, &PvOptions::new(0.05));
        let exact = -2.0 / b * (1.0 / b).atan();
        assert!((v.re - exact).abs() < 1e-9 * exact.abs());
    }
}
