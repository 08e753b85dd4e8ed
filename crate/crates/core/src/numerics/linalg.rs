//! Spectral utilities on [`ComplexMatrix`]: Hermitian eigendecomposition,
//! operator norms, PSD projection and square roots.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Above this size `operator_norm` switches from dense Gram eigenvalues to Lanczos.
const DENSE_NORM_LIMIT: usize = 256;

/// Eigenvalues in ascending order with matching unit eigenvectors (as columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V*`.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let scaled: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &w) in scaled.iter().enumerate() {
                if w != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        });
        symmetrize(&mut out);
        out
    }
}

/// Replaces `m` by `(m + m*)/2` in place, making it exactly Hermitian.
pub fn symmetrize(m: &mut ComplexMatrix) {
    let n = m.rows();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    check_hermitian(m, tol)?;
    Ok(hermitian_eigen_unchecked(&m.to_dmatrix()))
}

pub(crate) fn hermitian_eigen_unchecked(m: &DMatrix<Complex64>) -> HermitianEigen {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEigen { values, vectors }
}

fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    if !m.is_square() || m.is_empty() {
        return Err(Error::domain(format!("expected a nonempty square matrix, got {:?}", m.shape())));
    }
    if !m.is_finite() {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    let defect = m.hermitian_defect();
    if defect > tol {
        return Err(Error::domain(format!("matrix is not hermitian (defect {defect:e} > {tol:e})")));
    }
    Ok(())
}

pub fn min_eigenvalue(m: &ComplexMatrix, tol: f64) -> Result<f64> {
    check_hermitian(m, tol)?;
    let vals = m.to_dmatrix().symmetric_eigenvalues();
    Ok(vals.iter().copied().fold(f64::INFINITY, f64::min))
}

fn max_eigenvalue_dense(g: &ComplexMatrix) -> f64 {
    g.to_dmatrix().symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.is_empty() {
        return Err(Error::domain("operator norm of an empty matrix"));
    }
    if !m.is_finite() {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    if m.rows().min(m.cols()) <= DENSE_NORM_LIMIT {
        let top = max_eigenvalue_dense(&m.gram_left()).max(max_eigenvalue_dense(&m.gram_right()));
        return Ok(top.max(0.0).sqrt());
    }
    let (rows, cols) = m.shape();
    let data = m.as_slice();
    let apply = |x: &[Complex64]| -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); rows];
        for i in 0..rows {
            y[i] = (0..cols).map(|j| data[i * cols + j] * x[j]).sum();
        }
        let mut z = vec![Complex64::new(0.0, 0.0); cols];
        for i in 0..rows {
            for j in 0..cols {
                z[j] += data[i * cols + j].conj() * y[i];
            }
        }
        z
    };
    Ok(lanczos_max_eigenvalue(cols, apply, 1e-13)?.max(0.0).sqrt())
}

/// Largest singular value of a real dense matrix, via Lanczos on `MᵀM`.
pub fn real_operator_norm(m: &DMatrix<f64>) -> Result<f64> {
    if m.is_empty() {
        return Err(Error::domain("operator norm of an empty matrix"));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    if m.nrows().min(m.ncols()) <= DENSE_NORM_LIMIT {
        let g = m.transpose() * m;
        let top = g.symmetric_eigenvalues().iter().copied().fold(0.0, f64::max);
        return Ok(top.sqrt());
    }
    let mt = m.transpose();
    let apply = |x: &[Complex64]| -> Vec<Complex64> {
        let re = nalgebra::DVector::from_iterator(x.len(), x.iter().map(|z| z.re));
        let im = nalgebra::DVector::from_iterator(x.len(), x.iter().map(|z| z.im));
        let re = &mt * (m * re);
        let im = &mt * (m * im);
        re.iter().zip(im.iter()).map(|(&a, &b)| Complex64::new(a, b)).collect()
    };
    Ok(lanczos_max_eigenvalue(m.ncols(), apply, 1e-13)?.sqrt())
}

/// Largest eigenvalue of a Hermitian positive semidefinite operator given by
/// its action. Full reorthogonalization; deterministic start vector.
pub fn lanczos_max_eigenvalue(n: usize, apply: impl Fn(&[Complex64]) -> Vec<Complex64>, tol: f64) -> Result<f64> {
    let zero = Complex64::new(0.0, 0.0);
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    let norm = |a: &[Complex64]| dot(a, a).re.sqrt();

    let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + 0.25 * ((i as f64) * 0.7).sin(), 0.0)).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|z| *z /= nv);

    let max_steps = n.min(600);
    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut last = f64::NAN;
    for k in 0..max_steps {
        let mut w = apply(&basis[k]);
        let a = dot(&basis[k], &w).re;
        alpha.push(a);
        // Two passes of Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let b = norm(&w);
        let steps = alpha.len();
        if steps.is_multiple_of(8) || b < 1e-14 * a.abs().max(1.0) || steps == max_steps {
            let t = DMatrix::from_fn(steps, steps, |i, j| {
                if i == j {
                    alpha[i]
                } else if i + 1 == j {
                    beta[i]
                } else if j + 1 == i {
                    beta[j]
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::new(t);
            let (idx, theta) =
                eig.eigenvalues
                    .iter()
                    .copied()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |acc, (i, l)| if l > acc.1 { (i, l) } else { acc });
            let resid = (b * eig.eigenvectors[(steps - 1, idx)]).abs();
            if b < 1e-14 * theta.abs().max(1.0)
                || resid <= tol * theta.abs().max(f64::MIN_POSITIVE)
                || ((theta - last).abs() <= tol * theta.abs() && resid <= 1e3 * tol * theta.abs())
                || steps == max_steps
            {
                return Ok(theta);
            }
            last = theta;
        }
        if b == 0.0 {
            break;
        }
        beta.push(b);
        basis.push(w.into_iter().map(|z| if b > 0.0 { z / b } else { zero }).collect());
    }
    Err(Error::Convergence { iterations: max_steps, residual: f64::NAN })
}

/// Nearest positive semidefinite matrix in Frobenius norm.
pub fn psd_project(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m, 1e-10)?;
    Ok(eig.reassemble(|l| l.max(0.0)))
}

/// Hermitian square root of a PSD matrix; eigenvalues in `[-tol, 0)` are
/// treated as zero, anything more negative is a domain error.
pub fn hermitian_sqrt(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m, 1e-10_f64.max(tol))?;
    let lowest = eig.values[0];
    if lowest < -tol {
        return Err(Error::domain(format!("matrix is indefinite (smallest eigenvalue {lowest:e})")));
    }
    Ok(eig.reassemble(|l| l.max(0.0).sqrt()))
}

/// Singular triplets `(σ_k, u_k, v_k)` with `σ_k > cutoff · σ_max`, largest first,
/// obtained from the eigendecomposition of `m* m` and `u_k = m v_k / σ_k`.
pub struct SingularSystem {
    pub values: Vec<f64>,
    pub left: Vec<Vec<Complex64>>,
    pub right: Vec<Vec<Complex64>>,
}

impl SingularSystem {
    pub fn new(m: &ComplexMatrix, cutoff: f64) -> Self {
        let (rows, cols) = m.shape();
        let eig = hermitian_eigen_unchecked(&m.gram_left().to_dmatrix());
        let top = eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt();
        let mut out = SingularSystem { values: Vec::new(), left: Vec::new(), right: Vec::new() };
        for k in (0..cols).rev() {
            let sigma = eig.values[k].max(0.0).sqrt();
            if sigma <= cutoff * top || sigma == 0.0 {
                break;
            }
            let v: Vec<Complex64> = (0..cols).map(|i| eig.vectors[(i, k)]).collect();
            let u: Vec<Complex64> = (0..rows).map(|i| (0..cols).map(|j| m[(i, j)] * v[j]).sum::<Complex64>() / sigma).collect();
            out.values.push(sigma);
            out.left.push(u);
            out.right.push(v);
        }
        out
    }

    /// Sum of the retained singular values.
    pub fn trace_norm(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Partial isometry `Σ u_k v_k*`.
    pub fn polar(&self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |i, j| self.left.iter().zip(&self.right).map(|(u, v)| u[i] * v[j].conj()).sum())
    }
}

/// `(m* m)^{1/2}`.
pub fn absolute_value(m: &ComplexMatrix) -> ComplexMatrix {
    hermitian_eigen_unchecked(&m.gram_left().to_dmatrix()).reassemble(|l| l.max(0.0).sqrt())
}
