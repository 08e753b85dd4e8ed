use serde::Serialize;

/// `θ_y(x, z, w) = (x, z - yx, w - 2yz + y²x)`.
pub fn theta_action(y: f64, v: (f64, f64, f64)) -> (f64, f64, f64) {
    let (x, z, w) = v;
    (x, z - y * x, w - 2.0 * y * z + y * y * x)
}

/// `θ̂_y(s, u, v) = (s - yu + y²v, u - 2yv, v)`.
pub fn theta_dual(y: f64, c: (f64, f64, f64)) -> (f64, f64, f64) {
    let (s, u, v) = c;
    (s - y * u + y * y * v, u - 2.0 * y * v, v)
}

/// Orbit of `θ̂` through a point `(s, u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitClass {
    /// `v ≠ 0`: the parabola `s = b + u²/(4a)` in the plane `v = a`, vertex at `(b, 0, a)`.
    Parabola { a: f64, b: f64 },
    /// `v = 0, u ≠ 0`: the line through `(·, u, 0)` parallel to the `s`-axis.
    Line { u: f64 },
    /// `u = v = 0`: a fixed point.
    Point { s: f64 },
}

impl OrbitClass {
    pub fn same_kind(&self, other: &OrbitClass) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }

    /// Same kind and parameters equal within `tol` (relative to their size).
    pub fn approx_eq(&self, other: &OrbitClass, tol: f64) -> bool {
        let close = |p: f64, q: f64| (p - q).abs() <= tol * p.abs().max(q.abs()).max(1.0);
        match (self, other) {
            (OrbitClass::Parabola { a, b }, OrbitClass::Parabola { a: a2, b: b2 }) => close(*a, *a2) && close(*b, *b2),
            (OrbitClass::Line { u }, OrbitClass::Line { u: u2 }) => close(*u, *u2),
            (OrbitClass::Point { s }, OrbitClass::Point { s: s2 }) => close(*s, *s2),
            _ => false,
        }
    }
}

pub fn classify_orbit(s: f64, u: f64, v: f64) -> OrbitClass {
    if v != 0.0 {
        OrbitClass::Parabola { a: v, b: s - u * u / (4.0 * v) }
    } else if u != 0.0 {
        OrbitClass::Line { u }
    } else {
        OrbitClass::Point { s }
    }
}
