use serde::{Deserialize, Serialize};

use super::{matmul, max_abs_diff, rotation, shear_scale};

/// Element of the four-dimensional nilpotent group with matrix
/// `[[1, -y, z - xy/2, w], [0, 1, x, z + xy/2], [0, 0, 1, y], [0, 0, 0, 1]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dix4Element {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl Dix4Element {
    pub const IDENTITY: Dix4Element = Dix4Element { x: 0.0, y: 0.0, z: 0.0, w: 0.0 };

    pub fn new(x: f64, y: f64, z: f64, w: f64) -> Self {
        Dix4Element { x, y, z, w }
    }

    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let h = 0.5 * self.x * self.y;
        [[1.0, -self.y, self.z - h, self.w], [0.0, 1.0, self.x, self.z + h], [0.0, 0.0, 1.0, self.y], [0.0, 0.0, 0.0, 1.0]]
    }

    pub fn from_matrix(m: &[[f64; 4]; 4]) -> Self {
        Dix4Element { x: m[1][2], y: m[2][3], z: 0.5 * (m[0][2] + m[1][3]), w: m[0][3] }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite() && self.w.is_finite()
    }
}

/// `X = x+x'`, `Y = y+y'`, `Z = z+z' + (xy' - x'y)/2`,
/// `W = w+w' - y(z' + x'y'/2) + y'(z - xy/2)`.
pub fn dix4_mul(p: &Dix4Element, q: &Dix4Element) -> Dix4Element {
    Dix4Element {
        x: p.x + q.x,
        y: p.y + q.y,
        z: p.z + q.z + 0.5 * (p.x * q.y - q.x * p.y),
        w: p.w + q.w - p.y * (q.z + 0.5 * q.x * q.y) + q.y * (p.z - 0.5 * p.x * p.y),
    }
}

pub fn dix4_inv(p: &Dix4Element) -> Dix4Element {
    Dix4Element { x: -p.x, y: -p.y, z: -p.z, w: -p.w }
}

/// `(x, y, z, w) ↦ (-x, -z/s, y·s, w)` with `s = √(1 + x²/4)`.
pub fn gamma_prime(p: &Dix4Element) -> Dix4Element {
    let s = shear_scale(p.x);
    Dix4Element { x: -p.x, y: -p.z / s, z: p.y * s, w: p.w }
}

/// Largest entry of `diag(1,u,1)·n(p)·diag(1,-u,1) - n(γ'(p))`.
pub fn gamma_prime_conjugation_residual(p: &Dix4Element) -> f64 {
    let u = rotation(p.x);
    let embed = |sign: f64| {
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, sign * u[0][0], sign * u[0][1], 0.0],
            [0.0, sign * u[1][0], sign * u[1][1], 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    };
    let conj = matmul(&matmul(&embed(1.0), &p.to_matrix()), &embed(-1.0));
    max_abs_diff(&conj, &gamma_prime(p).to_matrix())
}
