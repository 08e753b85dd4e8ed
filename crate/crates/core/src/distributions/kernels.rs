use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::bessel::j0;
use crate::numerics::real_operator_norm;

/// Which representation family the kernel comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelCase {
    Sl3,
    Sp2,
}

/// Representation parameters: `a ≠ 0`, and `b` for the four-dimensional case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelSpec {
    pub case: KernelCase,
    pub a: f64,
    pub b: f64,
}

impl KernelSpec {
    pub fn sl3(a: f64) -> Result<Self> {
        KernelSpec::checked(KernelCase::Sl3, a, 0.0)
    }

    pub fn sp2(a: f64, b: f64) -> Result<Self> {
        KernelSpec::checked(KernelCase::Sp2, a, b)
    }

    fn checked(case: KernelCase, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a != 0.0 && b.is_finite()) {
            return Err(Error::domain(format!("kernel parameters need a ≠ 0 and finite b, got a = {a}, b = {b}")));
        }
        Ok(KernelSpec { case, a, b })
    }

    /// `√(-b/a)` when `ab < 0`.
    pub fn c(&self) -> Option<f64> {
        (self.a * self.b < 0.0).then(|| (-self.b / self.a).sqrt())
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        match self.case {
            KernelCase::Sl3 => kernel_sl3(self, s, t),
            KernelCase::Sp2 => kernel_sp2(self, s, t),
        }
    }
}

/// `2π²/|s-t| · J₀(a√(-4st))` for `st < 0`, else `0`.
pub fn kernel_sl3(spec: &KernelSpec, s: f64, t: f64) -> f64 {
    let st = s * t;
    if st >= 0.0 {
        return 0.0;
    }
    2.0 * PI * PI / (s - t).abs() * j0(spec.a * (-4.0 * st).sqrt())
}

/// `2π²/|s-t| · J₀(√(-(as²+b)(at²+b)))` where `(as²+b)(at²+b) < 0`, else `0`.
pub fn kernel_sp2(spec: &KernelSpec, s: f64, t: f64) -> f64 {
    let p = (spec.a * s * s + spec.b) * (spec.a * t * t + spec.b);
    if p >= 0.0 {
        return 0.0;
    }
    2.0 * PI * PI / (s - t).abs() * j0((-p).sqrt())
}

/// `1/|s-t|` where `st < 0`, else `0`.
pub fn majorant_sl3(s: f64, t: f64) -> f64 {
    if s * t < 0.0 {
        1.0 / (s - t).abs()
    } else {
        0.0
    }
}

/// `1/|s-t|` where `(s²-c²)(t²-c²) < 0`, else `0`.
pub fn majorant_sp2(c: f64, s: f64, t: f64) -> f64 {
    if (s * s - c * c) * (t * t - c * c) < 0.0 {
        1.0 / (s - t).abs()
    } else {
        0.0
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Kernel of `(π/2)(UH - HU)` with `U` multiplication by `sign(t)` and
/// `H` the Hilbert transform with kernel `1/(π(s-t))`.
pub fn commutator_kernel_sl3(s: f64, t: f64) -> f64 {
    (PI / 2.0) * (sign(s) - sign(t)) / (PI * (s - t))
}

/// Kernel of `(π/2)(U₂HU₁ - U₁HU₂)` with `U₁ = sign(t+c)`, `U₂ = sign(t-c)`.
pub fn commutator_kernel_sp2(c: f64, s: f64, t: f64) -> f64 {
    let (u1s, u2s, u1t, u2t) = (sign(s + c), sign(s - c), sign(t + c), sign(t - c));
    (PI / 2.0) * (u2s * u1t - u1s * u2t) / (PI * (s - t))
}

/// Largest `|majorant - commutator kernel|` over the points.
pub fn commutator_kernel_residual(case: KernelCase, c: f64, points: &[(f64, f64)]) -> f64 {
    points
        .iter()
        .map(|&(s, t)| match case {
            KernelCase::Sl3 => (majorant_sl3(s, t) - commutator_kernel_sl3(s, t)).abs(),
            KernelCase::Sp2 => (majorant_sp2(c, s, t) - commutator_kernel_sp2(c, s, t)).abs(),
        })
        .fold(0.0, f64::max)
}

/// `count` seeded points in `[-r, r]²` with `|s-t|`, `|s|`, `|t|`, `|s±c|`, `|t±c|`
/// all at least `margin`.
pub fn sample_kernel_points(count: usize, r: f64, c: f64, margin: f64, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let far = |x: f64| x.abs() >= margin && (x - c).abs() >= margin && (x + c).abs() >= margin;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (s, t) = (rng.random_range(-r..r), rng.random_range(-r..r));
        if far(s) && far(t) && (s - t).abs() >= margin {
            out.push((s, t));
        }
    }
    out
}

/// Midpoint nodes `-L + (i + ½)h`, `h = 2L/n`, symmetric about 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NystromGrid {
    pub half_width: f64,
    pub points: usize,
}

impl NystromGrid {
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points).map(|i| -self.half_width + (i as f64 + 0.5) * h).collect()
    }
}

/// Operator norm of the Nyström matrix `k(s_i, s_j)·h`.
///
/// `singular` lists points where the kernel changes branch; a node closer than
/// `h·1e-6` to one of them is a configuration error.
pub fn kernel_operator_norm(kernel: impl Fn(f64, f64) -> f64 + Sync, grid: &NystromGrid, singular: &[f64]) -> Result<f64> {
    if grid.points < 2 || !grid.points.is_multiple_of(2) || !(grid.half_width > 0.0) {
        return Err(Error::config(format!("Nyström grid needs an even number of points ≥ 2, got {grid:?}")));
    }
    let h = grid.spacing();
    let nodes = grid.nodes();
    for &p in singular {
        if let Some(x) = nodes.iter().find(|x| (*x - p).abs() < 1e-6 * h) {
            return Err(Error::config(format!("node {x} collides with singular point {p}")));
        }
    }
    let n = nodes.len();
    let m = DMatrix::from_fn(n, n, |i, j| kernel(nodes[i], nodes[j]) * h);
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("kernel is not finite on the grid"));
    }
    real_operator_norm(&m)
}
