//! Discrete Hilbert transform `(1/π) PV ∫ f(t)/(s-t) dt` on a half-shifted grid.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::GridFunction;
use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 64;

/// Samples the transform at `s_i = t_i + h/2`, so `s - t` never vanishes.
/// Entry weights are `h / (π (s_i - t_j)) = 1 / (π (i - j + 1/2))`.
pub fn discrete_hilbert(f: &GridFunction) -> Result<GridFunction> {
    if f.dim() != 1 {
        return Err(Error::domain(format!("discrete_hilbert needs a 1D grid, got dimension {}", f.dim())));
    }
    let n = f.shape()[0];
    if n < MIN_POINTS {
        return Err(Error::domain(format!("discrete_hilbert needs at least {MIN_POINTS} points, got {n}")));
    }
    let h = f.spacing()[0];
    let v = f.values();
    let out: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, vj) in v.iter().enumerate() {
                acc += vj / (PI * (i as f64 - j as f64 + 0.5));
            }
            acc
        })
        .collect();
    GridFunction::new(vec![f.origin()[0] + 0.5 * h], vec![h], vec![n], out)
}

/// The `n × n` matrix applied by [`discrete_hilbert`].
pub fn hilbert_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| 1.0 / (PI * (i as f64 - j as f64 + 0.5)))
}
