//! Composite Gauss-Legendre quadrature on panels graded toward singular points.

use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

/// Panel splitting stops at this depth even if the grading rule is unmet.
const MAX_DEPTH: u32 = 50;

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(order: usize) -> Self {
        let rule = GaussLegendre::new(order.max(2)).expect("order >= 2");
        let (nodes, weights) = rule.as_node_weight_pairs().iter().copied().unzip();
        GaussRule { nodes, weights }
    }

    /// Shared 20-point rule.
    pub fn standard() -> &'static GaussRule {
        static RULE: OnceLock<GaussRule> = OnceLock::new();
        RULE.get_or_init(|| GaussRule::new(20))
    }

    pub fn integrate(&self, a: f64, b: f64, f: &impl Fn(f64) -> Complex64) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }

    pub fn integrate_real(&self, a: f64, b: f64, f: &impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }
}

/// Panel-size controls for [`graded_panels`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grading {
    /// Upper bound on any panel width.
    pub max_width: f64,
    /// A panel is split while its width exceeds `ratio` times its distance to
    /// the nearest singular point.
    pub ratio: f64,
}

impl Default for Grading {
    fn default() -> Self {
        Grading { max_width: 0.5, ratio: 0.5 }
    }
}

fn distance_to_interval(p: Complex64, lo: f64, hi: f64) -> f64 {
    let dx = if p.re < lo {
        lo - p.re
    } else if p.re > hi {
        p.re - hi
    } else {
        0.0
    };
    dx.hypot(p.im)
}

/// Splits `[a, b]` into panels satisfying `grading` with respect to `singular`.
/// Real singular points inside the interval become panel endpoints.
pub fn graded_panels(a: f64, b: f64, singular: &[Complex64], grading: &Grading) -> Vec<(f64, f64)> {
    let mut cuts = vec![a];
    let mut interior: Vec<f64> = singular.iter().filter(|p| p.im == 0.0 && p.re > a && p.re < b).map(|p| p.re).collect();
    interior.sort_by(f64::total_cmp);
    interior.dedup();
    cuts.extend(interior);
    cuts.push(b);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        split(w[0], w[1], singular, grading, 0, &mut out);
    }
    out
}

fn split(lo: f64, hi: f64, singular: &[Complex64], g: &Grading, depth: u32, out: &mut Vec<(f64, f64)>) {
    if hi <= lo {
        return;
    }
    let width = hi - lo;
    let dist = singular.iter().map(|&p| distance_to_interval(p, lo, hi)).fold(f64::INFINITY, f64::min);
    // Panels a few thousand ulps wide would put nodes on top of the endpoints.
    let floor = 4096.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
    if depth >= MAX_DEPTH || width <= floor || (width <= g.max_width && width <= g.ratio * dist) {
        out.push((lo, hi));
        return;
    }
    let mid = 0.5 * (lo + hi);
    split(lo, mid, singular, g, depth + 1, out);
    split(mid, hi, singular, g, depth + 1, out);
}

/// `∫_a^b f` with panels graded toward `singular`; each panel uses the standard rule.
pub fn integrate_graded(f: &impl Fn(f64) -> Complex64, a: f64, b: f64, singular: &[Complex64], grading: &Grading) -> Complex64 {
    let rule = GaussRule::standard();
    let mut acc = Complex64::new(0.0, 0.0);
    for (lo, hi) in graded_panels(a, b, singular, grading) {
        acc += rule.integrate(lo, hi, f);
    }
    acc
}

pub fn integrate_graded_real(f: &impl Fn(f64) -> f64, a: f64, b: f64, singular: &[Complex64], grading: &Grading) -> f64 {
    let rule = GaussRule::standard();
    graded_panels(a, b, singular, grading).into_iter().map(|(lo, hi)| rule.integrate_real(lo, hi, f)).sum()
}

/// Extrapolates `[T(h), T(h/2), T(h/4)]` whose error expands in odd powers of `h`,
/// removing the first- and third-order terms.
pub fn richardson_odd(ladder: [Complex64; 3]) -> Complex64 {
    let [t0, t1, t2] = ladder;
    let first = t1 * 2.0 - t0;
    let second = t2 * 2.0 - t1;
    (second * 8.0 - first) / 7.0
}
