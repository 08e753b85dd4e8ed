//! Uniformly sampled complex functions on 1D, 2D and 3D boxes.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples on an endpoint-inclusive box, stored row-major (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    origin: Vec<f64>,
    spacing: Vec<f64>,
    shape: Vec<usize>,
    values: Vec<Complex64>,
}

/// JSON header shared by both file formats.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridHeader {
    pub dim: usize,
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub shape: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    #[serde(flatten)]
    header: GridHeader,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl GridFunction {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, shape: Vec<usize>, values: Vec<Complex64>) -> Result<Self> {
        let dim = shape.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::domain(format!("grid dimension must be 1, 2 or 3, got {dim}")));
        }
        if origin.len() != dim || spacing.len() != dim {
            return Err(Error::domain("origin, spacing and shape must have the same length"));
        }
        if spacing.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::domain(format!("spacing must be positive and finite, got {spacing:?}")));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::domain("origin must be finite"));
        }
        if shape.iter().any(|&n| n < 2) {
            return Err(Error::domain(format!("every axis needs at least 2 nodes, got {shape:?}")));
        }
        let count: usize = shape.iter().product();
        if values.len() != count {
            return Err(Error::domain(format!("shape {shape:?} needs {count} values, got {}", values.len())));
        }
        Ok(GridFunction { origin, spacing, shape, values })
    }

    /// Samples `f` on `n` nodes per axis spanning `[lo, hi]` on every listed axis.
    pub fn sample(bounds: &[(f64, f64)], n: &[usize], f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        if bounds.len() != n.len() {
            return Err(Error::domain("bounds and node counts differ in length"));
        }
        let mut spacing = Vec::with_capacity(n.len());
        for (&(lo, hi), &m) in bounds.iter().zip(n) {
            if m < 2 || !(hi > lo) {
                return Err(Error::domain(format!("invalid axis [{lo}, {hi}] with {m} nodes")));
            }
            spacing.push((hi - lo) / (m - 1) as f64);
        }
        let origin: Vec<f64> = bounds.iter().map(|b| b.0).collect();
        let count: usize = n.iter().product();
        let mut values = Vec::with_capacity(count);
        let mut point = vec![0.0; n.len()];
        for flat in 0..count {
            let mut rem = flat;
            for axis in (0..n.len()).rev() {
                let i = rem % n[axis];
                rem /= n[axis];
                point[axis] = origin[axis] + i as f64 * spacing[axis];
            }
            values.push(f(&point));
        }
        GridFunction::new(origin, spacing, n.to_vec(), values)
    }

    pub fn zeros_like(other: &GridFunction) -> Self {
        GridFunction { values: vec![Complex64::new(0.0, 0.0); other.values.len()], ..other.clone() }
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn header(&self) -> GridHeader {
        GridHeader { dim: self.dim(), origin: self.origin.clone(), spacing: self.spacing.clone(), shape: self.shape.clone() }
    }

    pub fn same_geometry(&self, other: &GridFunction) -> bool {
        self.origin == other.origin && self.spacing == other.spacing && self.shape == other.shape
    }

    pub fn node(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + i as f64 * self.spacing[axis]
    }

    /// `(lo, hi)` per axis.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        (0..self.dim()).map(|a| (self.origin[a], self.node(a, self.shape[a] - 1))).collect()
    }

    /// Largest absolute coordinate reached on each axis.
    pub fn support_radius(&self) -> Vec<f64> {
        self.bounds().into_iter().map(|(lo, hi)| lo.abs().max(hi.abs())).collect()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.values[self.flat_index(idx)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `(Σ |v|² · cell volume)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_volume()).sqrt()
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        GridFunction { values: self.values.iter().map(|v| v * alpha).collect(), ..self.clone() }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        GridFunction { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    /// Largest modulus on the outermost layer of nodes.
    pub fn boundary_max(&self) -> f64 {
        let mut worst = 0.0_f64;
        let dim = self.dim();
        let mut idx = vec![0usize; dim];
        for (flat, v) in self.values.iter().enumerate() {
            let mut rem = flat;
            for axis in (0..dim).rev() {
                idx[axis] = rem % self.shape[axis];
                rem /= self.shape[axis];
            }
            if idx.iter().zip(&self.shape).any(|(&i, &n)| i == 0 || i == n - 1) {
                worst = worst.max(v.norm());
            }
        }
        worst
    }

    /// Checks that the outermost layer vanishes to within `tol` (absolute).
    pub fn ensure_compact_support(&self, tol: f64) -> Result<()> {
        let edge = self.boundary_max();
        if edge > tol {
            return Err(Error::domain(format!("function does not vanish on the grid boundary (max {edge:e} > {tol:e})")));
        }
        Ok(())
    }

    /// Position of `x` on `axis` as (cell index, fraction), or `None` outside the grid.
    fn locate(&self, axis: usize, x: f64) -> Option<(usize, f64)> {
        let u = (x - self.origin[axis]) / self.spacing[axis];
        let n = self.shape[axis];
        if !(u >= 0.0 && u <= (n - 1) as f64) {
            return None;
        }
        let i = (u.floor() as usize).min(n - 2);
        Some((i, u - i as f64))
    }

    /// Multilinear interpolation with zero extension outside the grid.
    pub fn eval(&self, point: &[f64]) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        match self.dim() {
            1 => self.eval1(point[0]),
            2 => self.eval2(point[0], point[1]),
            3 => self.eval3(point[0], point[1], point[2]),
            _ => zero,
        }
    }

    pub fn eval1(&self, x: f64) -> Complex64 {
        match self.locate(0, x) {
            Some((i, a)) => self.values[i] * (1.0 - a) + self.values[i + 1] * a,
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn eval2(&self, x: f64, y: f64) -> Complex64 {
        let (Some((i, a)), Some((j, b))) = (self.locate(0, x), self.locate(1, y)) else {
            return Complex64::new(0.0, 0.0);
        };
        let n1 = self.shape[1];
        let v = |ii: usize, jj: usize| self.values[ii * n1 + jj];
        (v(i, j) * (1.0 - b) + v(i, j + 1) * b) * (1.0 - a) + (v(i + 1, j) * (1.0 - b) + v(i + 1, j + 1) * b) * a
    }

    pub fn eval3(&self, x: f64, y: f64, z: f64) -> Complex64 {
        let (Some((i, a)), Some((j, b)), Some((k, c))) = (self.locate(0, x), self.locate(1, y), self.locate(2, z)) else {
            return Complex64::new(0.0, 0.0);
        };
        let (n1, n2) = (self.shape[1], self.shape[2]);
        let v = |ii: usize, jj: usize, kk: usize| self.values[(ii * n1 + jj) * n2 + kk];
        let plane = |ii: usize| {
            (v(ii, j, k) * (1.0 - c) + v(ii, j, k + 1) * c) * (1.0 - b)
                + (v(ii, j + 1, k) * (1.0 - c) + v(ii, j + 1, k + 1) * c) * b
        };
        plane(i) * (1.0 - a) + plane(i + 1) * a
    }

    pub fn to_json_string(&self) -> Result<String> {
        let doc = GridJson {
            header: self.header(),
            re: self.values.iter().map(|v| v.re).collect(),
            im: self.values.iter().map(|v| v.im).collect(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: GridJson = serde_json::from_str(text)?;
        if doc.re.len() != doc.im.len() {
            return Err(Error::Parse("re and im arrays differ in length".into()));
        }
        let h = doc.header;
        if h.dim != h.shape.len() {
            return Err(Error::Parse(format!("dim {} disagrees with shape {:?}", h.dim, h.shape)));
        }
        let values = doc.re.iter().zip(&doc.im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        GridFunction::new(h.origin, h.spacing, h.shape, values)
    }

    /// Binary layout: header length as u64 LE, JSON header bytes, then
    /// interleaved `(re, im)` f64 LE values.
    pub fn write_binary(&self, mut out: impl Write) -> Result<()> {
        let header = serde_json::to_vec(&self.header())?;
        out.write_all(&(header.len() as u64).to_le_bytes())?;
        out.write_all(&header)?;
        for v in &self.values {
            out.write_all(&v.re.to_le_bytes())?;
            out.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary(mut input: impl Read) -> Result<Self> {
        let mut len = [0u8; 8];
        input.read_exact(&mut len)?;
        let len = u64::from_le_bytes(len) as usize;
        if len > 1 << 20 {
            return Err(Error::Parse(format!("implausible header length {len}")));
        }
        let mut header = vec![0u8; len];
        input.read_exact(&mut header)?;
        let h: GridHeader = serde_json::from_slice(&header)?;
        if h.dim != h.shape.len() {
            return Err(Error::Parse(format!("dim {} disagrees with shape {:?}", h.dim, h.shape)));
        }
        let count: usize = h.shape.iter().product();
        let mut values = Vec::with_capacity(count);
        let mut buf = [0u8; 16];
        for _ in 0..count {
            input.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(buf[8..].try_into().expect("8 bytes"));
            values.push(Complex64::new(re, im));
        }
        GridFunction::new(h.origin, h.spacing, h.shape, values)
    }

    /// JSON for `.json` paths, binary otherwise.
    pub fn save(&self, path: &Path) -> Result<()> {
        if path.extension().is_some_and(|e| e == "json") {
            std::fs::write(path, self.to_json_string()?)?;
        } else {
            self.write_binary(std::io::BufWriter::new(std::fs::File::create(path)?))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        if path.extension().is_some_and(|e| e == "json") {
            GridFunction::from_json_str(&std::fs::read_to_string(path)?)
        } else {
            GridFunction::read_binary(std::io::BufReader::new(std::fs::File::open(path)?))
        }
    }
}

/// A function of two real variables with a bounding box outside which it vanishes.
pub trait Field2: Sync {
    fn eval(&self, y: f64, z: f64) -> Complex64;
    fn bounds(&self) -> [(f64, f64); 2];
    /// Sampling resolution, if the field comes from samples.
    fn resolution(&self) -> Option<[f64; 2]> {
        None
    }
}

/// A function of three real variables with a bounding box outside which it vanishes.
pub trait Field3: Sync {
    fn eval(&self, x: f64, y: f64, z: f64) -> Complex64;
    fn bounds(&self) -> [(f64, f64); 3];
    fn resolution(&self) -> Option<[f64; 3]> {
        None
    }
}

/// A closure together with its support box.
pub struct FnField<F> {
    pub f: F,
    pub bounds: Vec<(f64, f64)>,
}

impl<F> FnField<F> {
    pub fn new(f: F, bounds: &[(f64, f64)]) -> Self {
        FnField { f, bounds: bounds.to_vec() }
    }
}

impl<F: Fn(f64, f64) -> Complex64 + Sync> Field2 for FnField<F> {
    fn eval(&self, y: f64, z: f64) -> Complex64 {
        let [(y0, y1), (z0, z1)] = Field2::bounds(self);
        if y < y0 || y > y1 || z < z0 || z > z1 {
            return Complex64::new(0.0, 0.0);
        }
        (self.f)(y, z)
    }
    fn bounds(&self) -> [(f64, f64); 2] {
        [self.bounds[0], self.bounds[1]]
    }
}

impl<F: Fn(f64, f64, f64) -> Complex64 + Sync> Field3 for FnField<F> {
    fn eval(&self, x: f64, y: f64, z: f64) -> Complex64 {
        let b = Field3::bounds(self);
        if [x, y, z].iter().zip(&b).any(|(v, (lo, hi))| v < lo || v > hi) {
            return Complex64::new(0.0, 0.0);
        }
        (self.f)(x, y, z)
    }
    fn bounds(&self) -> [(f64, f64); 3] {
        [self.bounds[0], self.bounds[1], self.bounds[2]]
    }
}

impl Field2 for GridFunction {
    fn eval(&self, y: f64, z: f64) -> Complex64 {
        self.eval2(y, z)
    }
    fn bounds(&self) -> [(f64, f64); 2] {
        let b = GridFunction::bounds(self);
        [b[0], b[1]]
    }
    fn resolution(&self) -> Option<[f64; 2]> {
        Some([self.spacing[0], self.spacing[1]])
    }
}

impl Field3 for GridFunction {
    fn eval(&self, x: f64, y: f64, z: f64) -> Complex64 {
        self.eval3(x, y, z)
    }
    fn bounds(&self) -> [(f64, f64); 3] {
        let b = GridFunction::bounds(self);
        [b[0], b[1], b[2]]
    }
    fn resolution(&self) -> Option<[f64; 3]> {
        Some([self.spacing[0], self.spacing[1], self.spacing[2]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn layout_is_row_major() {
        let g = GridFunction::sample(&[(0.0, 1.0), (0.0, 2.0)], &[2, 3], |p| c(10.0 * p[0] + p[1])).unwrap();
        let re: Vec<f64> = g.values().iter().map(|v| v.re).collect();
        assert_eq!(re, vec![0.0, 1.0, 2.0, 10.0, 11.0, 12.0]);
        assert_eq!(g.get(&[1, 2]), c(12.0));
    }

    #[test]
    fn multilinear_reproduces_affine_functions() {
        let f = |p: &[f64]| Complex64::new(1.0 + 2.0 * p[0] - p[1] + 0.5 * p[2], p[0]);
        let g = GridFunction::sample(&[(-1.0, 1.0), (-2.0, 2.0), (0.0, 3.0)], &[5, 7, 4], f).unwrap();
        for p in [[0.13, -1.7, 2.2], [-1.0, 2.0, 0.0], [0.999, 0.001, 2.9999]] {
            assert!((g.eval(&p) - f(&p)).norm() < 1e-13);
        }
        assert_eq!(g.eval(&[1.5, 0.0, 1.0]), c(0.0));
    }

    #[test]
    fn invalid_geometry_rejected() {
        assert!(GridFunction::new(vec![0.0], vec![0.0], vec![3], vec![c(0.0); 3]).is_err());
        assert!(GridFunction::new(vec![0.0], vec![1.0], vec![3], vec![c(0.0); 2]).is_err());
        assert!(GridFunction::new(vec![0.0; 4], vec![1.0; 4], vec![2; 4], vec![c(0.0); 16]).is_err());
    }

    #[test]
    fn json_and_binary_round_trip_bit_exact() {
        let g = GridFunction::sample(&[(-1.3, 2.1), (0.0, 1.0)], &[9, 6], |p| {
            Complex64::new((p[0] * 7.1).sin() / 3.0, (p[1] * p[0]).exp() * 1e-300)
        })
        .unwrap();
        let from_json = GridFunction::from_json_str(&g.to_json_string().unwrap()).unwrap();
        assert_eq!(from_json, g);
        let mut bytes = Vec::new();
        g.write_binary(&mut bytes).unwrap();
        let from_bin = GridFunction::read_binary(bytes.as_slice()).unwrap();
        assert_eq!(from_bin, g);
        for (a, b) in g.values().iter().zip(from_bin.values()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn compact_support_check() {
        let bump = GridFunction::sample(&[(-1.0, 1.0)], &[33], |p| c((1.0 - p[0] * p[0]).max(0.0))).unwrap();
        assert!(bump.ensure_compact_support(1e-14).is_ok());
        let flat = GridFunction::sample(&[(-1.0, 1.0)], &[33], |_| c(1.0)).unwrap();
        assert!(flat.ensure_compact_support(1e-3).is_err());
    }

    #[test]
    fn l2_norm_uses_cell_volume() {
        let g = GridFunction::sample(&[(0.0, 1.0), (0.0, 1.0)], &[11, 11], |_| c(2.0)).unwrap();
        assert!((g.l2_norm() - (121.0 * 4.0 * 0.01_f64).sqrt()).abs() < 1e-14);
    }
}
