//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use cbap::numerics::ComplexMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Singular values by one-sided Jacobi rotations, descending.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (rows, cols) = m.shape();
    let mut c: Vec<Vec<Complex64>> = (0..cols).map(|j| (0..rows).map(|i| m[(i, j)]).collect()).collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = c[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = c[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = c[p].iter().zip(&c[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..rows {
                    let x = c[p][i];
                    let y = c[q][i] * phase.conj();
                    c[p][i] = x * cs - y * sn;
                    c[q][i] = x * sn + y * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = c.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn jacobi_oracle_on_known_matrices() {
    let ones = ComplexMatrix::from_real(5, 5, &[1.0; 25]).unwrap();
    let s = jacobi_singular_values(&ones);
    assert!((s[0] - 5.0).abs() < 1e-13 && s[1].abs() < 1e-13);
    let d = ComplexMatrix::from_real(2, 2, &[3.0, 0.0, 0.0, -4.0]).unwrap();
    let s = jacobi_singular_values(&d);
    assert!((s[0] - 4.0).abs() < 1e-15 && (s[1] - 3.0).abs() < 1e-15);
}
