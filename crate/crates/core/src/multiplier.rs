//! Finite-set Herz–Schur lower bounds for multiplier norms and Fourier-algebra
//! norms for abelian groups and convolution forms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupKind};
use crate::numerics::{ComplexMatrix, GridFunction};
use crate::schur::{schur_norm, MAX_DIMENSION};

/// Function on a group, evaluated pointwise.
pub type GroupFunction = Box<dyn Fn(&GroupElement) -> Result<Complex64> + Send + Sync>;

/// A function on a group together with the finite sets it is tested on.
pub struct SampledMultiplier {
    pub kind: GroupKind,
    pub phi: GroupFunction,
    pub sets: Vec<Vec<GroupElement>>,
}

impl SampledMultiplier {
    pub fn new(kind: GroupKind, phi: GroupFunction, sets: Vec<Vec<GroupElement>>) -> Result<Self> {
        for set in &sets {
            if let Some(g) = set.iter().find(|g| g.kind() != kind) {
                return Err(Error::domain(format!("sample element {g:?} is not in {kind:?}")));
            }
        }
        Ok(SampledMultiplier { kind, phi, sets })
    }
}

/// `M_ij = φ(x_j⁻¹ x_i)`.
pub fn herz_schur_matrix(
    elements: &[GroupElement],
    phi: &(dyn Fn(&GroupElement) -> Result<Complex64> + Sync),
) -> Result<ComplexMatrix> {
    let n = elements.len();
    if n == 0 || n > MAX_DIMENSION {
        return Err(Error::domain(format!("sample set size must be in 1..={MAX_DIMENSION}, got {n}")));
    }
    let mut data = Vec::with_capacity(n * n);
    for (i, xi) in elements.iter().enumerate() {
        for (j, xj) in elements.iter().enumerate() {
            let g = xj.inv().mul(xi)?;
            let v = phi(&g).map_err(|e| Error::domain(format!("evaluating φ at x_{j}⁻¹x_{i} = {g:?}: {e}")))?;
            if !v.is_finite() {
                return Err(Error::domain(format!("φ is not finite at x_{j}⁻¹x_{i} = {g:?}")));
            }
            data.push(v);
        }
    }
    ComplexMatrix::new(n, n, data)
}

/// Best lower bound for the completely bounded multiplier norm found on the sample sets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplierBound {
    pub lower_bound: f64,
    pub per_set: Vec<f64>,
}

/// Maximum over the sample sets of the Schur norm of the Herz–Schur matrix.
///
/// This is only a lower bound: the norm itself is a supremum over all finite sets.
pub fn m0a_lower_bound(sm: &SampledMultiplier, tol: f64) -> Result<MultiplierBound> {
    if sm.sets.is_empty() {
        return Err(Error::config("at least one sample set is required"));
    }
    let per_set = sm
        .sets
        .par_iter()
        .map(|set| {
            let m = herz_schur_matrix(set, sm.phi.as_ref())?;
            Ok(schur_norm(&m, tol)?.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    let lower_bound = per_set.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(MultiplierBound { lower_bound, per_set })
}

/// Finitely supported function on `ℤ^d`, `d ∈ {1, 2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeFunction {
    support: Vec<Vec<i64>>,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    support: Vec<Vec<i64>>,
    re: Vec<f64>,
    im: Vec<f64>,
}

/// Largest support accepted by the Fourier-algebra routines.
pub const MAX_SUPPORT: usize = 1000;

impl LatticeFunction {
    pub fn new(support: Vec<Vec<i64>>, values: Vec<Complex64>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::domain(format!("{} support points but {} values", support.len(), values.len())));
        }
        let d = support.first().map_or(1, Vec::len);
        if !(1..=2).contains(&d) || support.iter().any(|p| p.len() != d) {
            return Err(Error::domain("support points must all have dimension 1 or 2"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("lattice function values must be finite"));
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(p) = support.iter().find(|p| !seen.insert(p.to_vec())) {
            return Err(Error::domain(format!("support point {p:?} listed twice")));
        }
        Ok(LatticeFunction { support, values })
    }

    /// One-dimensional function from `(n, value)` pairs.
    pub fn from_pairs_1d(pairs: &[(i64, Complex64)]) -> Result<Self> {
        LatticeFunction::new(pairs.iter().map(|p| vec![p.0]).collect(), pairs.iter().map(|p| p.1).collect())
    }

    pub fn delta(point: &[i64]) -> Self {
        LatticeFunction { support: vec![point.to_vec()], values: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn dim(&self) -> usize {
        self.support.first().map_or(1, Vec::len)
    }

    pub fn support(&self) -> &[Vec<i64>] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[i64], Complex64)> {
        self.support.iter().map(Vec::as_slice).zip(self.values.iter().copied())
    }

    /// Value at `n` (zero off the support).
    pub fn eval(&self, n: &[i64]) -> Complex64 {
        self.iter().find(|(p, _)| *p == n).map_or(Complex64::new(0.0, 0.0), |(_, v)| v)
    }

    /// `Σ φ(n) e^{i n·θ}`.
    pub fn fourier_series(&self, theta: &[f64]) -> Complex64 {
        self.iter()
            .map(|(n, v)| {
                let phase: f64 = n.iter().zip(theta).map(|(&k, &t)| k as f64 * t).sum();
                v * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }

    pub fn to_json_string(&self) -> Result<String> {
        let doc = LatticeJson {
            support: self.support.clone(),
            re: self.values.iter().map(|v| v.re).collect(),
            im: self.values.iter().map(|v| v.im).collect(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: LatticeJson = serde_json::from_str(text)?;
        if doc.re.len() != doc.im.len() {
            return Err(Error::Parse("re and im arrays differ in length".into()));
        }
        let values = doc.re.iter().zip(&doc.im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        LatticeFunction::new(doc.support, values)
    }
}

/// `(2π)^{-d} ∫_{[0,2π)^d} |Σ φ(n) e^{i n·θ}| dθ` by the periodic trapezoid rule with
/// `points` nodes per axis.
pub fn a_norm_abelian(phi: &LatticeFunction, points: usize) -> Result<f64> {
    let d = phi.dim();
    if !(1..=2).contains(&d) {
        return Err(Error::domain(format!("only d = 1 or 2 is supported, got {d}")));
    }
    if phi.support.len() > MAX_SUPPORT {
        return Err(Error::Resource(format!("support has {} points, limit is {MAX_SUPPORT}", phi.support.len())));
    }
    if points == 0 {
        return Err(Error::config("quadrature needs at least one point"));
    }
    let step = 2.0 * PI / points as f64;
    let total = points.pow(d as u32);
    let sum: f64 = (0..total)
        .into_par_iter()
        .map(|k| {
            let theta = if d == 1 { vec![k as f64 * step] } else { vec![(k / points) as f64 * step, (k % points) as f64 * step] };
            phi.fourier_series(&theta).norm()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(sum / total as f64)
}

/// `‖f‖₂·‖g‖₂`, an upper bound for the Fourier-algebra norm of `f ∗ g̃`.
pub fn a_norm_upper_conv(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    if !f.same_geometry(g) {
        return Err(Error::domain("f and g must share the grid geometry"));
    }
    Ok(f.l2_norm() * g.l2_norm())
}

/// Parametric families of test functions accepted by the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplierFamily {
    /// Indicator of the identity.
    Delta,
    Constant {
        #[serde(default = "one")]
        value: f64,
    },
    /// `exp(-|g|²/σ²)` with `|g|` the Euclidean norm of the coordinates.
    Gaussian { sigma: f64 },
    /// `e^{iαn}` on `ℤ` or `ℝ` (a character, hence positive definite).
    Character { alpha: f64 },
}

fn one() -> f64 {
    1.0
}

/// `{"group": "Z", "kind": "gaussian", "sigma": 1.0}` and similar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSpec {
    pub group: GroupKind,
    #[serde(flatten)]
    pub family: MultiplierFamily,
    /// Elements per sample set.
    #[serde(default = "default_set_size")]
    pub set_size: usize,
    /// Longest generator word used to build sample elements.
    #[serde(default = "default_word_length")]
    pub word_length: usize,
}

fn default_set_size() -> usize {
    8
}

fn default_word_length() -> usize {
    6
}

fn coordinates(g: &GroupElement) -> Vec<f64> {
    match g {
        GroupElement::Z(n) => vec![*n as f64],
        GroupElement::Z2(n) => vec![n[0] as f64, n[1] as f64],
        GroupElement::R(x) => vec![*x],
        GroupElement::Heis3(p) => vec![p.x, p.y, p.z],
        GroupElement::Dix4(p) => vec![p.x, p.y, p.z, p.w],
    }
}

impl MultiplierSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: MultiplierSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.set_size == 0 || self.set_size > MAX_DIMENSION {
            return Err(Error::config(format!("set_size must be in 1..={MAX_DIMENSION}")));
        }
        match self.family {
            MultiplierFamily::Gaussian { sigma } if !(sigma.is_finite() && sigma > 0.0) => {
                Err(Error::config(format!("sigma must be positive, got {sigma}")))
            }
            MultiplierFamily::Character { .. } if !matches!(self.group, GroupKind::Z | GroupKind::R) => {
                Err(Error::config("characters are only provided for Z and R"))
            }
            _ => Ok(()),
        }
    }

    pub fn function(&self) -> GroupFunction {
        let identity = self.group.identity();
        match self.family.clone() {
            MultiplierFamily::Delta => Box::new(move |g| Ok(Complex64::new(if *g == identity { 1.0 } else { 0.0 }, 0.0))),
            MultiplierFamily::Constant { value } => Box::new(move |_| Ok(Complex64::new(value, 0.0))),
            MultiplierFamily::Gaussian { sigma } => Box::new(move |g| {
                let r2: f64 = coordinates(g).iter().map(|c| c * c).sum();
                Ok(Complex64::new((-r2 / (sigma * sigma)).exp(), 0.0))
            }),
            MultiplierFamily::Character { alpha } => Box::new(move |g| Ok(Complex64::from_polar(1.0, alpha * coordinates(g)[0]))),
        }
    }

    /// `count` seeded sample sets of `set_size` random words each.
    pub fn sample_sets(&self, count: usize, seed: u64) -> Vec<Vec<GroupElement>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.group.random_words(self.set_size, self.word_length, &mut rng)).collect()
    }

    pub fn sampled(&self, count: usize, seed: u64) -> Result<SampledMultiplier> {
        self.validate()?;
        SampledMultiplier::new(self.group, self.function(), self.sample_sets(count, seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_set(ns: &[i64]) -> Vec<GroupElement> {
        ns.iter().map(|&n| GroupElement::Z(n)).collect()
    }

    #[test]
    fn delta_gives_identity_matrix() {
        let spec = MultiplierSpec::from_json_str(r#"{"group":"Z","kind":"delta"}"#).unwrap();
        let m = herz_schur_matrix(&z_set(&[0, 1, 2]), spec.function().as_ref()).unwrap();
        assert_eq!(m, ComplexMatrix::identity(3));
    }

    #[test]
    fn constant_gives_all_ones() {
        let spec = MultiplierSpec::from_json_str(r#"{"group":"Heis3","kind":"constant"}"#).unwrap();
        let sets = spec.sample_sets(1, 3);
        let m = herz_schur_matrix(&sets[0], spec.function().as_ref()).unwrap();
        assert!(m.as_slice().iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn entries_follow_the_index_convention() {
        let phi: GroupFunction = Box::new(|g| match g {
            GroupElement::Z(n) => Ok(Complex64::new(*n as f64, 0.0)),
            _ => unreachable!(),
        });
        let m = herz_schur_matrix(&z_set(&[0, 5]), phi.as_ref()).unwrap();
        // M_10 = φ(x_0⁻¹ x_1) = φ(5).
        assert_eq!(m.as_slice()[2], Complex64::new(5.0, 0.0));
        assert_eq!(m.as_slice()[1], Complex64::new(-5.0, 0.0));
    }

    #[test]
    fn evaluation_errors_name_the_pair() {
        let phi: GroupFunction = Box::new(|_| Err(Error::domain("boom")));
        let err = herz_schur_matrix(&z_set(&[0, 1]), phi.as_ref()).unwrap_err();
        assert!(err.to_string().contains("x_0⁻¹x_0"), "{err}");
    }

    #[test]
    fn lattice_json_round_trip() {
        let phi = LatticeFunction::new(vec![vec![0, 1], vec![2, -3]], vec![Complex64::new(1.0, 0.5), Complex64::new(-0.25, 0.0)])
            .unwrap();
        let back = LatticeFunction::from_json_str(&phi.to_json_string().unwrap()).unwrap();
        assert_eq!(phi, back);
        assert_eq!(back.eval(&[2, -3]), Complex64::new(-0.25, 0.0));
        assert_eq!(back.eval(&[9, 9]), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn a_norm_of_deltas() {
        for k in [-3, 0, 7] {
            assert!((a_norm_abelian(&LatticeFunction::delta(&[k]), 64).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!((a_norm_abelian(&LatticeFunction::delta(&[1, -2]), 16).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(MultiplierSpec::from_json_str(r#"{"group":"Z","kind":"gaussian","sigma":0}"#).is_err());
        assert!(MultiplierSpec::from_json_str(r#"{"group":"Heis3","kind":"character","alpha":1}"#).is_err());
        assert!(MultiplierSpec::from_json_str(r#"{"group":"Q","kind":"delta"}"#).is_err());
    }
}
