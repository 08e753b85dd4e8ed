//! Schur products and the Schur multiplier norm, computed as the smallest
//! diagonal bound admitting a positive semidefinite completion.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::linalg::{
    absolute_value, hermitian_eigen_unchecked, hermitian_sqrt, operator_norm, symmetrize, HermitianEigen, SingularSystem,
};
use crate::numerics::ComplexMatrix;
use crate::report::{Report, Tolerance};

pub const MAX_DIMENSION: usize = 64;
pub const MIN_TOLERANCE: f64 = 1e-6;
/// Tolerance used by [`verify_certificate`] for every invariant.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-8;

/// A completion `d = [[b, a*], [a, c]] ⪰ 0` with `diag(d) ≤ t`, plus the Gram
/// vectors read off `d^{1/2}`: `a_ij = ⟨ξ_i, η_j⟩`.
#[derive(Clone, Debug)]
pub struct SchurCertificate {
    pub t: f64,
    pub completion: ComplexMatrix,
    pub xi: Vec<Vec<Complex64>>,
    pub eta: Vec<Vec<Complex64>>,
}

/// How the two projections are combined at a fixed threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionScheme {
    /// Plain alternation `x ← P_box(P_psd(x))`.
    Alternating,
    /// Reflected variant `z ← z + P_box(2 P_psd(z) - z) - P_psd(z)`; reaches
    /// thin intersections far faster than plain alternation.
    DouglasRachford,
}

/// Controls for the projection search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchurOptions {
    pub tol: f64,
    pub max_iterations: usize,
    /// Iterations over which the residual must drop for a threshold to stay alive.
    pub stall_window: usize,
    /// Residuals below this never count as stalled.
    pub stall_floor: f64,
    /// Required relative decrease of the residual across one stall window.
    pub stall_decrease: f64,
    pub scheme: ProjectionScheme,
}

impl SchurOptions {
    pub fn new(tol: f64) -> Self {
        SchurOptions {
            tol,
            max_iterations: 200_000,
            stall_window: 500,
            stall_floor: 1e-7,
            stall_decrease: 1e-3,
            scheme: ProjectionScheme::DouglasRachford,
        }
    }
}

pub fn schur_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.shape() != b.shape() {
        return Err(Error::domain(format!("schur product of shapes {:?} and {:?}", a.shape(), b.shape())));
    }
    ComplexMatrix::new(a.rows(), a.cols(), a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).collect())
}

/// `⟨u, v⟩ = Σ u_k conj(v_k)`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(x, y)| x * y.conj()).sum()
}

/// `(ξ, η)`, one vector per row and per column.
pub type GramVectors = (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>);

/// Rows of `d^{1/2}`: `η_i` is row `i`, `ξ_i` is row `n + i`.
pub fn certificate_to_gram(d: &ComplexMatrix) -> Result<GramVectors> {
    if !d.is_square() || !d.rows().is_multiple_of(2) || d.rows() == 0 {
        return Err(Error::domain(format!("completion must be 2n x 2n, got {:?}", d.shape())));
    }
    let n = d.rows() / 2;
    let f = hermitian_sqrt(d, CERTIFICATE_TOLERANCE)?;
    let row = |i: usize| (0..2 * n).map(|k| f[(i, k)]).collect::<Vec<_>>();
    let xi = (0..n).map(|i| row(n + i)).collect();
    let eta = (0..n).map(row).collect();
    Ok((xi, eta))
}

/// Overwrites the off-diagonal blocks with `a`, `a*` and clips the diagonal to `≤ t`.
fn project_affine(x: &mut ComplexMatrix, a: &ComplexMatrix, t: f64) {
    let n = a.rows();
    for i in 0..n {
        for j in 0..n {
            x[(n + i, j)] = a[(i, j)];
            x[(j, n + i)] = a[(i, j)].conj();
        }
    }
    for i in 0..2 * n {
        x[(i, i)] = Complex64::new(x[(i, i)].re.min(t), 0.0);
    }
}

/// Certified bound from an iterate with exact off-diagonal blocks: shifting by
/// the most negative eigenvalue yields a PSD completion.
struct Candidate {
    bound: f64,
    completion: ComplexMatrix,
}

fn certify(y: &ComplexMatrix, eig: &HermitianEigen) -> Candidate {
    let shift = (-eig.values[0]).max(0.0);
    let mut completion = y.clone();
    for i in 0..y.rows() {
        completion[(i, i)] += shift;
    }
    let bound = completion.diagonal().into_iter().fold(f64::NEG_INFINITY, f64::max);
    Candidate { bound, completion }
}

fn embed(a: &ComplexMatrix, top: &ComplexMatrix, bottom: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut d = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            d[(i, j)] = top[(i, j)];
            d[(n + i, n + j)] = bottom[(i, j)];
        }
    }
    project_affine(&mut d, a, f64::INFINITY);
    symmetrize(&mut d);
    d
}

fn initial_candidates(a: &ComplexMatrix) -> Result<Vec<Candidate>> {
    let n = a.rows();
    let norm = operator_norm(a)?;
    let scaled = ComplexMatrix::identity(n).scale(Complex64::new(norm, 0.0));
    // [[|a|, a*], [a, |a*|]] is positive semidefinite; exact for PSD a.
    let polar = embed(a, &absolute_value(a), &absolute_value(&a.adjoint()));
    let plain = embed(a, &scaled, &scaled);
    Ok([plain, polar].iter().map(|d| certify(d, &hermitian_eigen_unchecked(&d.to_dmatrix()))).collect())
}

enum StepOutcome {
    Feasible,
    Infeasible,
}

/// Smallest `t` admitting a PSD completion, to within `tol`, with a certificate.
pub fn schur_norm(a: &ComplexMatrix, tol: f64) -> Result<(f64, SchurCertificate)> {
    schur_norm_with(a, &SchurOptions::new(tol))
}

pub fn schur_norm_with(a: &ComplexMatrix, opts: &SchurOptions) -> Result<(f64, SchurCertificate)> {
    if !a.is_square() || a.is_empty() {
        return Err(Error::domain(format!("schur_norm needs a nonempty square matrix, got {:?}", a.shape())));
    }
    if !a.is_finite() {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    if a.rows() > MAX_DIMENSION {
        return Err(Error::Resource(format!("schur_norm supports n ≤ {MAX_DIMENSION}, got {}", a.rows())));
    }
    if !(opts.tol >= MIN_TOLERANCE) {
        return Err(Error::config(format!("tolerance must be at least {MIN_TOLERANCE:e}, got {}", opts.tol)));
    }

    let dual = dual_search(a);
    let mut candidates = initial_candidates(a)?;
    candidates.extend(dual_completion(a, &dual));
    let mut best = candidates.into_iter().min_by(|x, y| x.bound.total_cmp(&y.bound)).expect("at least two candidates");
    let mut lo = a.max_abs().max(dual.value);
    let mut hi = best.bound.max(lo);

    while hi - lo > opts.tol {
        let t = 0.5 * (lo + hi);
        match alternate(a, t, opts, &mut best)? {
            StepOutcome::Feasible => hi = hi.min(best.bound).max(lo),
            StepOutcome::Infeasible => lo = t,
        }
    }

    let (xi, eta) = certificate_to_gram(&best.completion)?;
    let cert = SchurCertificate { t: hi, completion: best.completion, xi, eta };
    Ok((hi, cert))
}

/// Alternating projections at threshold `t`, warm-started from `best`.
fn alternate(a: &ComplexMatrix, t: f64, opts: &SchurOptions, best: &mut Candidate) -> Result<StepOutcome> {
    let target = t + 0.25 * opts.tol;
    let mut x = best.completion.clone();
    let mut stall = StallMonitor::new(opts);
    for _ in 0..opts.max_iterations {
        match opts.scheme {
            ProjectionScheme::Alternating => {
                project_affine(&mut x, a, t);
                let eig = hermitian_eigen_unchecked(&x.to_dmatrix());
                offer(best, certify(&x, &eig));
                if best.bound <= target {
                    return Ok(StepOutcome::Feasible);
                }
                let residual = eig.values.iter().filter(|&&l| l < 0.0).map(|l| l * l).sum::<f64>().sqrt();
                if stall.push(residual) {
                    return Ok(StepOutcome::Infeasible);
                }
                x = eig.reassemble(|l| l.max(0.0));
            }
            ProjectionScheme::DouglasRachford => {
                let psd = hermitian_eigen_unchecked(&x.to_dmatrix()).reassemble(|l| l.max(0.0));
                let mut y = psd.scale(Complex64::new(2.0, 0.0)).sub(&x)?;
                project_affine(&mut y, a, t);
                symmetrize(&mut y);
                offer(best, certify(&y, &hermitian_eigen_unchecked(&y.to_dmatrix())));
                if best.bound <= target {
                    return Ok(StepOutcome::Feasible);
                }
                let step = y.sub(&psd)?;
                if stall.push(step.frobenius_norm()) {
                    return Ok(StepOutcome::Infeasible);
                }
                x = x.add(&step)?;
            }
        }
    }
    Err(Error::Convergence { iterations: opts.max_iterations, residual: stall.last() })
}

fn offer(best: &mut Candidate, candidate: Candidate) {
    if candidate.bound < best.bound {
        *best = candidate;
    }
}

/// Declares a threshold infeasible once the residual stays above the floor
/// without dropping by the required fraction over a full window.
struct StallMonitor {
    history: Vec<f64>,
    window: usize,
    floor: f64,
    decrease: f64,
}

impl StallMonitor {
    fn new(opts: &SchurOptions) -> Self {
        StallMonitor { history: Vec::new(), window: opts.stall_window, floor: opts.stall_floor, decrease: opts.stall_decrease }
    }

    fn push(&mut self, residual: f64) -> bool {
        self.history.push(residual);
        let k = self.history.len() - 1;
        k >= self.window && residual > self.floor && residual >= (1.0 - self.decrease) * self.history[k - self.window]
    }

    fn last(&self) -> f64 {
        self.history.last().copied().unwrap_or(f64::NAN)
    }
}

/// Weights `α, β ≥ 0` of unit length and the value `‖diag(α) a diag(β)‖_trace`,
/// which never exceeds the Schur multiplier norm.
struct DualPoint {
    value: f64,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

fn trace_norm_with_polar(a: &ComplexMatrix, alpha: &[f64], beta: &[f64]) -> (f64, ComplexMatrix) {
    let n = a.rows();
    let x = ComplexMatrix::from_fn(n, n, |i, j| a[(i, j)] * alpha[i] * beta[j]);
    let sys = SingularSystem::new(&x, 1e-12);
    (sys.trace_norm(), sys.polar(n, n))
}

fn normalized_positive(v: Vec<f64>) -> Option<Vec<f64>> {
    let clipped: Vec<f64> = v.into_iter().map(|x| x.max(0.0)).collect();
    let norm = clipped.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 0.0 && norm.is_finite()).then(|| clipped.into_iter().map(|x| x / norm).collect())
}

/// Minorize-maximize ascent on the trace-norm dual. For a fixed polar factor `W`
/// the objective `Σ α_i β_j Re(conj(W_ij) a_ij)` is bilinear, so each half step
/// is a closed-form update and the value never decreases.
fn dual_ascent(a: &ComplexMatrix, mut alpha: Vec<f64>, mut beta: Vec<f64>) -> DualPoint {
    let n = a.rows();
    let (mut value, mut polar) = trace_norm_with_polar(a, &alpha, &beta);
    for _ in 0..5000 {
        let weight = |i: usize, j: usize| (polar[(i, j)].conj() * a[(i, j)]).re;
        let Some(next_alpha) = normalized_positive((0..n).map(|i| (0..n).map(|j| weight(i, j) * beta[j]).sum()).collect()) else {
            break;
        };
        let Some(next_beta) = normalized_positive((0..n).map(|j| (0..n).map(|i| weight(i, j) * next_alpha[i]).sum()).collect())
        else {
            break;
        };
        let (next_value, next_polar) = trace_norm_with_polar(a, &next_alpha, &next_beta);
        if next_value < value {
            break;
        }
        let gain = next_value - value;
        alpha = next_alpha;
        beta = next_beta;
        value = next_value;
        polar = next_polar;
        if gain <= 1e-15 * value {
            break;
        }
    }
    DualPoint { value, alpha, beta }
}

fn dual_search(a: &ComplexMatrix) -> DualPoint {
    let n = a.rows();
    let uniform = vec![1.0 / (n as f64).sqrt(); n];
    let row_norms = (0..n).map(|i| (0..n).map(|j| a[(i, j)].norm_sqr()).sum::<f64>().sqrt()).collect();
    let col_norms = (0..n).map(|j| (0..n).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut starts = vec![(uniform.clone(), uniform.clone())];
    if let (Some(r), Some(c)) = (normalized_positive(row_norms), normalized_positive(col_norms)) {
        starts.push((r, c));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..4 {
        let mut draw = || -> Vec<f64> {
            let v: Vec<f64> = (0..n).map(|_| rand::Rng::random_range(&mut rng, 0.05..1.0)).collect();
            normalized_positive(v).expect("positive draws")
        };
        starts.push((draw(), draw()));
    }
    starts
        .into_iter()
        .map(|(al, be)| dual_ascent(a, al, be))
        .max_by(|x, y| x.value.total_cmp(&y.value))
        .expect("at least one start")
}

/// Completion built from the factorization `a = diag(α)^{-1} U Σ V* diag(β)^{-1}`.
fn dual_completion(a: &ComplexMatrix, dual: &DualPoint) -> Option<Candidate> {
    let n = a.rows();
    let floor = 1e-8;
    if dual.alpha.iter().chain(&dual.beta).any(|&w| w < floor) {
        return None;
    }
    let x = ComplexMatrix::from_fn(n, n, |i, j| a[(i, j)] * dual.alpha[i] * dual.beta[j]);
    let sys = SingularSystem::new(&x, 1e-12);
    let roots: Vec<f64> = sys.values.iter().map(|s| s.sqrt()).collect();
    let mut xi: Vec<Vec<Complex64>> =
        (0..n).map(|i| roots.iter().enumerate().map(|(k, r)| sys.left[k][i] * *r / dual.alpha[i]).collect()).collect();
    let mut eta: Vec<Vec<Complex64>> =
        (0..n).map(|j| roots.iter().enumerate().map(|(k, r)| sys.right[k][j] * *r / dual.beta[j]).collect()).collect();
    let max_sq = |vs: &[Vec<Complex64>]| vs.iter().map(|w| inner(w, w).re).fold(0.0, f64::max);
    let (mx, me) = (max_sq(&xi), max_sq(&eta));
    if !(mx > 0.0 && me > 0.0) {
        return None;
    }
    let s = (me / mx).powf(0.25);
    xi.iter_mut().flatten().for_each(|z| *z *= s);
    eta.iter_mut().flatten().for_each(|z| *z /= s);
    let rows: Vec<&Vec<Complex64>> = eta.iter().chain(&xi).collect();
    if rows[0].is_empty() {
        return None;
    }
    let mut d = ComplexMatrix::from_fn(2 * n, 2 * n, |p, q| inner(rows[p], rows[q]));
    project_affine(&mut d, a, f64::INFINITY);
    symmetrize(&mut d);
    d.is_finite().then(|| certify(&d, &hermitian_eigen_unchecked(&d.to_dmatrix())))
}

/// Certified lower bound on the Schur multiplier norm from the trace-norm dual.
pub fn schur_dual_bound(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() || a.is_empty() || !a.is_finite() {
        return Err(Error::domain(format!("schur_dual_bound needs a finite nonempty square matrix, got {:?}", a.shape())));
    }
    Ok(dual_search(a).value)
}

/// Checks the four certificate invariants for the target `a`.
pub fn verify_certificate(a: &ComplexMatrix, cert: &SchurCertificate) -> Report {
    let mut report = Report::new("schur-certificate", Tolerance::upper_bound(CERTIFICATE_TOLERANCE));
    let n = a.rows();
    report.input("n", n).input("t", cert.t);
    let d = &cert.completion;
    let shapes_ok = a.is_square()
        && d.shape() == (2 * n, 2 * n)
        && cert.xi.len() == n
        && cert.eta.len() == n
        && cert.xi.iter().chain(&cert.eta).all(|v| v.len() == 2 * n);
    report.require("shapes_consistent", shapes_ok);
    if !shapes_ok {
        return report;
    }

    let hermitian_defect = d.hermitian_defect();
    let lowest = if d.is_finite() { hermitian_eigen_unchecked(&d.to_dmatrix()).values[0] } else { f64::NEG_INFINITY };
    report.compare("hermitian_defect", hermitian_defect, 0.0, "invariant");
    report.compare("psd_violation", (-lowest).max(0.0), 0.0, "invariant");

    let diag_excess = d.diagonal().iter().map(|&v| v - cert.t).fold(f64::NEG_INFINITY, f64::max).max(0.0);
    report.compare("diag_excess", diag_excess, 0.0, "invariant");

    let mut mismatched = 0usize;
    for i in 0..n {
        for j in 0..n {
            if d[(n + i, j)] != a[(i, j)] {
                mismatched += 1;
            }
        }
    }
    report.compare("block_mismatch", mismatched as f64, 0.0, "invariant");

    let mut gram = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            gram = gram.max((inner(&cert.xi[i], &cert.eta[j]) - a[(i, j)]).norm());
        }
    }
    report.compare("gram_residual", gram, 0.0, "invariant");
    report
}

/// Unit vector in the positive orthant from `n - 1` angles in `[0, π/2]`.
fn sphere_point(angles: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(angles.len() + 1);
    let mut rest = 1.0;
    for &t in angles {
        v.push(rest * t.cos());
        rest *= t.sin();
    }
    v.push(rest);
    v
}

/// Largest dimension accepted by [`schur_norm_grid_search`].
pub const GRID_SEARCH_MAX_DIMENSION: usize = 3;

/// Brute-force value of `max ‖diag(α) a diag(β)‖_trace` over unit `α, β ≥ 0`:
/// an exhaustive angle grid with `grid` points per angle, then a coordinate
/// pattern search from the best node. Independent of the completion engine.
pub fn schur_norm_grid_search(a: &ComplexMatrix, grid: usize) -> Result<f64> {
    let n = a.rows();
    if !a.is_square() || !(2..=GRID_SEARCH_MAX_DIMENSION).contains(&n) {
        return Err(Error::domain(format!("grid search handles square matrices of size 2 or 3, got {:?}", a.shape())));
    }
    if grid < 2 {
        return Err(Error::config("grid search needs at least two points per angle"));
    }
    let dims = 2 * (n - 1);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let value = |p: &[f64]| trace_norm_with_polar(a, &sphere_point(&p[..n - 1]), &sphere_point(&p[n - 1..])).0;
    let point = |flat: usize| -> Vec<f64> {
        let mut rem = flat;
        (0..dims)
            .map(|_| {
                let k = rem % grid;
                rem /= grid;
                k as f64 / (grid - 1) as f64 * half_pi
            })
            .collect()
    };
    let (mut best, start) = (0..grid.pow(dims as u32))
        .into_par_iter()
        .map(|flat| (value(&point(flat)), flat))
        .reduce(|| (f64::NEG_INFINITY, 0), |x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x });
    let mut best_p = point(start);
    let mut step = half_pi / grid as f64;
    while step > 1e-10 {
        let mut improved = false;
        for k in 0..dims {
            for dir in [-1.0, 1.0] {
                let mut q = best_p.clone();
                q[k] = (q[k] + dir * step).clamp(0.0, half_pi);
                let v = value(&q);
                if v > best {
                    best = v;
                    best_p = q;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(best)
}

fn random_gaussian(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let qr = random_gaussian(rng, n).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases: Vec<Complex64> = (0..n)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();
    ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * phases[j])
}

/// Largest `‖a ∘ b‖` over seeded random contractions `b` (the identity first,
/// then alternately normalized Gaussian matrices and Haar unitaries).
pub fn schur_norm_lower(a: &ComplexMatrix, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::config("schur_norm_lower needs at least one trial"));
    }
    if !a.is_square() || a.is_empty() {
        return Err(Error::domain(format!("schur_norm_lower needs a nonempty square matrix, got {:?}", a.shape())));
    }
    let n = a.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = operator_norm(&schur_product(a, &ComplexMatrix::identity(n))?)?;
    for k in 1..trials {
        let b = if k % 2 == 1 {
            let g = ComplexMatrix::from_dmatrix(&random_gaussian(&mut rng, n));
            let norm = operator_norm(&g)?;
            g.scale(Complex64::new(1.0 / norm, 0.0))
        } else {
            random_unitary(&mut rng, n)
        };
        best = best.max(operator_norm(&schur_product(a, &b)?)?);
    }
    Ok(best)
}
