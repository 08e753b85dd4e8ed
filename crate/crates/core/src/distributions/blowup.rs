use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::quad::integrate_graded_real;
use crate::numerics::Grading;

/// Profile of `x ↦ φ_R(x,0,0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Plateau {
    /// `1` on `|x| ≤ R`, then a `C²` quintic ramp down to `0` over width 1.
    Smooth,
    /// Indicator of `[-R, R]`.
    Sharp,
}

/// `1 - (10u³ - 15u⁴ + 6u⁵)`, the `C²` ramp from 1 to 0 on `[0, 1]`.
fn ramp(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
}

pub fn plateau_value(profile: Plateau, r: f64, x: f64) -> f64 {
    match profile {
        Plateau::Sharp => {
            if x.abs() <= r {
                1.0
            } else {
                0.0
            }
        }
        Plateau::Smooth => ramp(x.abs() - r),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlowupPoint {
    pub r: f64,
    pub lower_bound: f64,
}

/// `(1/4π) ∫ φ_R(x,0,0)² / √(1+x²/4) dx` for each `R`.
pub fn blowup_curve(rs: &[f64], profile: Plateau) -> Result<Vec<BlowupPoint>> {
    let grading = Grading { max_width: 2.0, ratio: 0.5 };
    rs.iter()
        .map(|&r| {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::domain(format!("R must be positive, got {r}")));
            }
            let f = |x: f64| plateau_value(profile, r, x).powi(2) / (1.0 + 0.25 * x * x).sqrt();
            // Even integrand: integrate over [0, R] and the shoulder separately.
            let mut half = integrate_graded_real(&f, 0.0, r, &[], &grading);
            if profile == Plateau::Smooth {
                half += integrate_graded_real(&f, r, r + 1.0, &[], &grading);
            }
            Ok(BlowupPoint { r, lower_bound: 2.0 * half / (4.0 * PI) })
        })
        .collect()
}

/// `asinh(R/2)/π`, the value for the sharp indicator.
pub fn blowup_reference(r: f64) -> f64 {
    (0.5 * r).asinh() / PI
}

/// Geometric sequence of `steps` radii from 1 to `rmax`.
pub fn geometric_radii(rmax: f64, steps: usize) -> Result<Vec<f64>> {
    if !(rmax > 1.0) || steps < 2 {
        return Err(Error::config(format!("need rmax > 1 and at least 2 steps, got {rmax}, {steps}")));
    }
    let ratio = rmax.ln() / (steps - 1) as f64;
    Ok((0..steps).map(|k| if k + 1 == steps { rmax } else { (ratio * k as f64).exp() }).collect())
}

/// CSV with header `R,lower_bound`.
pub fn write_blowup_csv(points: &[BlowupPoint], mut out: impl Write) -> Result<()> {
    writeln!(out, "R,lower_bound")?;
    for p in points {
        writeln!(out, "{},{}", p.r, p.lower_bound)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sharp_matches_closed_form() {
        let v = blowup_curve(&[10.0], Plateau::Sharp).unwrap()[0].lower_bound;
        assert!((v - 0.7361).abs() < 1e-4, "{v}");
        assert!((v - blowup_reference(10.0)).abs() < 1e-12);
    }

    #[test]
    fn ramp_is_c2_at_the_ends() {
        assert_eq!(ramp(0.0), 1.0);
        assert_eq!(ramp(1.0), 0.0);
        let h = 1e-4;
        let d2 = |u: f64| (ramp(u + h) - 2.0 * ramp(u) + ramp(u - h)) / (h * h);
        assert!(d2(h).abs() < 1e-2 && d2(1.0 - h).abs() < 1e-2);
    }

    #[test]
    fn csv_header() {
        let mut buf = Vec::new();
        write_blowup_csv(&blowup_curve(&[1.0, 2.0], Plateau::Smooth).unwrap(), &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("R,lower_bound\n1,"));
    }
}
