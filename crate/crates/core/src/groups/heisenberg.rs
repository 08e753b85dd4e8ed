use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{matmul, max_abs_diff, rotation, shear_scale};
use crate::numerics::Field3;

/// Heisenberg group element in coordinates where the matrix is
/// `[[1, x, z + xy/2], [0, 1, y], [0, 0, 1]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Heis3Element {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Heis3Element {
    pub const IDENTITY: Heis3Element = Heis3Element { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Heis3Element { x, y, z }
    }

    pub fn to_matrix(&self) -> [[f64; 3]; 3] {
        [[1.0, self.x, self.z + 0.5 * self.x * self.y], [0.0, 1.0, self.y], [0.0, 0.0, 1.0]]
    }

    /// Reads coordinates back from an upper unitriangular matrix.
    pub fn from_matrix(m: &[[f64; 3]; 3]) -> Self {
        let (x, y) = (m[0][1], m[1][2]);
        Heis3Element { x, y, z: m[0][2] - 0.5 * x * y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// `(x+x', y+y', z+z' + (xy' - x'y)/2)`.
pub fn heis3_mul(p: &Heis3Element, q: &Heis3Element) -> Heis3Element {
    Heis3Element { x: p.x + q.x, y: p.y + q.y, z: p.z + q.z + 0.5 * (p.x * q.y - q.x * p.y) }
}

pub fn heis3_inv(p: &Heis3Element) -> Heis3Element {
    Heis3Element { x: -p.x, y: -p.y, z: -p.z }
}

/// `(x, y, z) ↦ (-x, -z/s, y·s)` with `s = √(1 + x²/4)`.
pub fn gamma(p: &Heis3Element) -> Heis3Element {
    let s = shear_scale(p.x);
    Heis3Element { x: -p.x, y: -p.z / s, z: p.y * s }
}

/// Largest entry of `diag(u,1)·n(p)·diag(-u,1) - n(γ(p))`.
pub fn gamma_conjugation_residual(p: &Heis3Element) -> f64 {
    let u = rotation(p.x);
    let left = [[u[0][0], u[0][1], 0.0], [u[1][0], u[1][1], 0.0], [0.0, 0.0, 1.0]];
    let right = [[-u[0][0], -u[0][1], 0.0], [-u[1][0], -u[1][1], 0.0], [0.0, 0.0, 1.0]];
    let conj = matmul(&matmul(&left, &p.to_matrix()), &right);
    max_abs_diff(&conj, &gamma(p).to_matrix())
}

/// Average of `f ∘ γ^k` over `k = 0..3`.
pub struct GammaSymmetrized<'a, F: ?Sized> {
    inner: &'a F,
    bounds: [(f64, f64); 3],
}

pub fn gamma_symmetrize<F: Field3 + ?Sized>(f: &F) -> GammaSymmetrized<'_, F> {
    let b = f.bounds();
    let rx = b[0].0.abs().max(b[0].1.abs());
    let ryz = b[1].0.abs().max(b[1].1.abs()).max(b[2].0.abs().max(b[2].1.abs())) * shear_scale(rx);
    GammaSymmetrized { inner: f, bounds: [(-rx, rx), (-ryz, ryz), (-ryz, ryz)] }
}

impl<F: Field3 + ?Sized> Field3 for GammaSymmetrized<'_, F> {
    fn eval(&self, x: f64, y: f64, z: f64) -> Complex64 {
        let mut p = Heis3Element::new(x, y, z);
        let mut acc = Complex64::new(0.0, 0.0);
        for _ in 0..4 {
            acc += self.inner.eval(p.x, p.y, p.z);
            p = gamma(&p);
        }
        acc * 0.25
    }

    fn bounds(&self) -> [(f64, f64); 3] {
        self.bounds
    }

    fn resolution(&self) -> Option<[f64; 3]> {
        self.inner.resolution()
    }
}

/// `max |f(γ(p)) - f(p)|` over the given points.
pub fn gamma_invariance_defect<F: Field3 + ?Sized>(f: &F, points: &[Heis3Element]) -> f64 {
    points
        .iter()
        .map(|p| {
            let q = gamma(p);
            (f.eval(q.x, q.y, q.z) - f.eval(p.x, p.y, p.z)).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::FnField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dyadic(rng: &mut ChaCha8Rng) -> f64 {
        rng.random_range(-4096i32..4096) as f64 / 256.0
    }

    fn random_dyadic(rng: &mut ChaCha8Rng) -> Heis3Element {
        Heis3Element::new(dyadic(rng), dyadic(rng), dyadic(rng))
    }

    fn random_point(rng: &mut ChaCha8Rng) -> Heis3Element {
        Heis3Element::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0))
    }

    #[test]
    fn product_examples() {
        let p = Heis3Element::new(1.5, -2.0, 0.25);
        assert_eq!(heis3_mul(&p, &Heis3Element::IDENTITY), p);
        assert_eq!(
            heis3_mul(&Heis3Element::new(1.0, 0.0, 0.0), &Heis3Element::new(0.0, 1.0, 0.0)),
            Heis3Element::new(1.0, 1.0, 0.5)
        );
        assert_eq!(heis3_mul(&p, &heis3_inv(&p)), Heis3Element::IDENTITY);
        assert_eq!(heis3_inv(&Heis3Element::IDENTITY), Heis3Element::new(-0.0, -0.0, -0.0));
        assert_eq!(heis3_inv(&heis3_inv(&p)), p);
    }

    #[test]
    fn law_matches_matrix_product_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let (p, q) = (random_dyadic(&mut rng), random_dyadic(&mut rng));
            let via_matrix = Heis3Element::from_matrix(&matmul(&p.to_matrix(), &q.to_matrix()));
            assert_eq!(heis3_mul(&p, &q), via_matrix);
        }
    }

    #[test]
    fn inverse_matches_matrix_inverse() {
        let p = Heis3Element::new(1.0, 2.0, 3.0);
        assert_eq!(heis3_inv(&p), Heis3Element::new(-1.0, -2.0, -3.0));
        // Inverse of [[1,a,c],[0,1,b],[0,0,1]] is [[1,-a,ab-c],[0,1,-b],[0,0,1]].
        let m = p.to_matrix();
        let inv = [[1.0, -m[0][1], m[0][1] * m[1][2] - m[0][2]], [0.0, 1.0, -m[1][2]], [0.0, 0.0, 1.0]];
        assert_eq!(Heis3Element::from_matrix(&inv), heis3_inv(&p));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&Heis3Element::new(0.0, 2.0, 3.0)), Heis3Element::new(-0.0, -3.0, 2.0));
        let g = gamma(&Heis3Element::new(2.0, 1.0, 1.0));
        assert_eq!(g.x, -2.0);
        assert!((g.y + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((g.z - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gamma_has_order_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let p = random_point(&mut rng);
            let g2 = gamma(&gamma(&p));
            assert_eq!(g2.x, p.x);
            assert!((g2.y + p.y).abs() <= 1e-14 * p.y.abs().max(1.0));
            assert!((g2.z + p.z).abs() <= 1e-14 * p.z.abs().max(1.0));
            let g4 = gamma(&gamma(&g2));
            assert!((g4.x - p.x).abs() + (g4.y - p.y).abs() + (g4.z - p.z).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugation_identity() {
        assert_eq!(gamma_conjugation_residual(&Heis3Element::IDENTITY), 0.0);
        assert!(gamma_conjugation_residual(&Heis3Element::new(2.0, 1.0, 1.0)) < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let p = random_point(&mut rng);
            assert!(gamma_conjugation_residual(&p) < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn symmetrization_is_invariant_projection() {
        let bump = FnField::new(
            |x: f64, y: f64, z: f64| Complex64::new((-(x - 0.5).powi(2) - 2.0 * y * y - (z - 0.3).powi(2)).exp(), 0.0),
            &[(-6.0, 6.0), (-6.0, 6.0), (-6.0, 6.0)],
        );
        let sym = gamma_symmetrize(&bump);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts: Vec<Heis3Element> = (0..200).map(|_| random_point(&mut rng)).collect();
        assert!(gamma_invariance_defect(&sym, &pts) < 1e-10);
        let twice = gamma_symmetrize(&sym);
        for p in &pts {
            assert!((twice.eval(p.x, p.y, p.z) - sym.eval(p.x, p.y, p.z)).norm() < 1e-12);
        }
        let zero = FnField::new(|_: f64, _: f64, _: f64| Complex64::new(0.0, 0.0), &[(-1.0, 1.0); 3]);
        assert_eq!(gamma_symmetrize(&zero).eval(0.3, 0.1, -0.2), Complex64::new(0.0, 0.0));
    }
}
