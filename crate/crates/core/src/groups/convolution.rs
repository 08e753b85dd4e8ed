use num_complex::Complex64;
use rayon::prelude::*;

use super::{heis3_inv, heis3_mul, Heis3Element};
use crate::error::{Error, Result};
use crate::numerics::{GridFunction, GridHeader};

/// Largest input grid accepted by the direct `O(N²)` convolution.
pub const MAX_CONVOLUTION_NODES: usize = 24 * 24 * 24;

/// Output nodes allowed for a single convolution.
const MAX_OUTPUT_NODES: usize = 8 * MAX_CONVOLUTION_NODES;

fn check_input(name: &str, f: &GridFunction) -> Result<()> {
    if f.dim() != 3 {
        return Err(Error::domain(format!("{name} must be a 3D grid, got dimension {}", f.dim())));
    }
    let nodes = f.values().len();
    if nodes > MAX_CONVOLUTION_NODES {
        return Err(Error::Resource(format!("{name} has {nodes} nodes, limit is {MAX_CONVOLUTION_NODES}")));
    }
    Ok(())
}

/// Bounding box of `supp f · (supp g)⁻¹`. The product coordinates are
/// multilinear in the six input coordinates, so box corners suffice.
fn product_box(f: &GridFunction, g: &GridFunction) -> [(f64, f64); 3] {
    let (bf, bg) = (f.bounds(), g.bounds());
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for corner in 0..64u32 {
        let pick = |b: &[(f64, f64)], axis: usize, bit: u32| if corner >> bit & 1 == 0 { b[axis].0 } else { b[axis].1 };
        let m = Heis3Element::new(pick(&bf, 0, 0), pick(&bf, 1, 1), pick(&bf, 2, 2));
        let h = Heis3Element::new(pick(&bg, 0, 3), pick(&bg, 1, 4), pick(&bg, 2, 5));
        let n = heis3_mul(&m, &heis3_inv(&h));
        for (axis, v) in [n.x, n.y, n.z].into_iter().enumerate() {
            lo[axis] = lo[axis].min(v);
            hi[axis] = hi[axis].max(v);
        }
    }
    [(lo[0], hi[0]), (lo[1], hi[1]), (lo[2], hi[2])]
}

/// `(f ∗ g̃)(n) = Σ_m f(m)·conj(g(n⁻¹m))·vol` on a grid with the spacing of `f`
/// that covers the support of the result.
pub fn heis3_convolution(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    check_input("f", f)?;
    check_input("g", g)?;
    let bbox = product_box(f, g);
    let spacing = f.spacing().to_vec();
    let mut origin = Vec::with_capacity(3);
    let mut shape = Vec::with_capacity(3);
    for (axis, (lo, hi)) in bbox.iter().enumerate() {
        let h = spacing[axis];
        let steps = ((hi - lo) / h - 1e-9).ceil().max(1.0) as usize;
        let pad = 0.5 * (steps as f64 * h - (hi - lo));
        origin.push(lo - pad);
        shape.push(steps + 1);
    }
    heis3_convolution_on(f, g, &GridHeader { dim: 3, origin, spacing, shape })
}

/// Same as [`heis3_convolution`], evaluated on a caller-chosen output grid.
pub fn heis3_convolution_on(f: &GridFunction, g: &GridFunction, out: &GridHeader) -> Result<GridFunction> {
    check_input("f", f)?;
    check_input("g", g)?;
    if out.dim != 3 || out.shape.len() != 3 {
        return Err(Error::domain("output grid must be 3D"));
    }
    let out_nodes: usize = out.shape.iter().product();
    if out_nodes > MAX_OUTPUT_NODES {
        return Err(Error::Resource(format!("output grid has {out_nodes} nodes, limit is {MAX_OUTPUT_NODES}")));
    }
    let vol = f.cell_volume();
    let (n1, n2) = (f.shape()[1], f.shape()[2]);
    let support: Vec<(Heis3Element, Complex64)> = f
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm_sqr() > 0.0)
        .map(|(flat, &v)| {
            let (i, j, k) = (flat / (n1 * n2), flat / n2 % n1, flat % n2);
            (Heis3Element::new(f.node(0, i), f.node(1, j), f.node(2, k)), v)
        })
        .collect();
    let (m1, m2) = (out.shape[1], out.shape[2]);
    let values: Vec<Complex64> = (0..out_nodes)
        .into_par_iter()
        .map(|flat| {
            let (i, j, k) = (flat / (m1 * m2), flat / m2 % m1, flat % m2);
            let n = Heis3Element::new(
                out.origin[0] + i as f64 * out.spacing[0],
                out.origin[1] + j as f64 * out.spacing[1],
                out.origin[2] + k as f64 * out.spacing[2],
            );
            let n_inv = heis3_inv(&n);
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, fv) in &support {
                let q = heis3_mul(&n_inv, m);
                acc += fv * g.eval3(q.x, q.y, q.z).conj();
            }
            acc * vol
        })
        .collect();
    GridFunction::new(out.origin.clone(), out.spacing.clone(), out.shape.clone(), values)
}
