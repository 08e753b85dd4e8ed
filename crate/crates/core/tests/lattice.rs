//! Lattice induction `ℤ^d ⊂ ℝ^d`: decomposition, the averaging formula and norm comparison.

use cbap::lattice::{
    check_formula_p20, check_lemma21_norm, gram_lift, lattice_average, lemma21_norms, LatticePair, Lemma21Options, StepFunction,
};
use cbap::multiplier::{a_norm_abelian, LatticeFunction};
use cbap::numerics::{hermitian_eigen, ComplexMatrix};
use cbap::report::Verdict;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn phi_1d(values: &[(f64, f64)], offset: i64) -> LatticeFunction {
    let pairs: Vec<(i64, Complex64)> = values.iter().enumerate().map(|(k, &(re, im))| (k as i64 + offset, c(re, im))).collect();
    LatticeFunction::from_pairs_1d(&pairs).unwrap()
}

/// Midpoint rule on `n` nodes written out directly from the definition.
fn brute_average(phi: &LatticeFunction, x: f64, y: f64, n: usize) -> Complex64 {
    (0..n)
        .map(|k| {
            let w = (k as f64 + 0.5) / n as f64;
            phi.eval(&[((y + w).floor() - (x + w).floor()) as i64])
        })
        .sum::<Complex64>()
        / n as f64
}

/// `φ = f ∗ f̃` is positive definite on `ℤ`.
fn autocorrelation(f: &[f64]) -> LatticeFunction {
    let m = f.len() as i64;
    let pairs: Vec<(i64, Complex64)> = (-(m - 1)..m)
        .map(|d| {
            let s: f64 = (0..m).filter(|&i| (0..m).contains(&(i + d))).map(|i| f[(i + d) as usize] * f[i as usize]).sum();
            (d, c(s, 0.0))
        })
        .collect();
    LatticeFunction::from_pairs_1d(&pairs).unwrap()
}

#[test]
fn formula_matches_brute_force_average() {
    let phi = phi_1d(&[(0.3, 0.1), (-1.0, 0.0), (2.0, -0.5), (0.7, 0.2)], -1);
    for &(x, y) in &[(0.0, 0.0), (0.3, 1.9), (-2.25, 0.5), (1.1, -0.4), (5.5, 4.75)] {
        let exact = lattice_average(&phi, &[x], &[y]);
        let oracle = brute_average(&phi, x, y, 200_000);
        assert!((exact - oracle).norm() < 1e-4, "({x},{y}): {exact} vs {oracle}");
        let report = check_formula_p20(&phi, &[x], &[y], 64).unwrap();
        assert!(report.pass, "{}", report.summary_line());
    }
}

#[test]
fn formula_in_two_dimensions() {
    let phi = LatticeFunction::new(
        vec![vec![0, 0], vec![1, 0], vec![0, -1], vec![1, 1]],
        vec![c(1.0, 0.0), c(0.5, 0.5), c(-0.25, 0.0), c(0.0, 2.0)],
    )
    .unwrap();
    for (x, y) in [([0.2, 0.7], [1.4, -0.1]), ([-0.5, 0.25], [0.0, 0.0]), ([3.3, 1.0], [4.1, 1.6])] {
        let report = check_formula_p20(&phi, &x, &y, 32).unwrap();
        assert!(report.pass, "{}", report.summary_line());
    }
}

#[test]
fn delta_induces_tent_norm_one() {
    let phi = LatticeFunction::delta(&[0]);
    let norms = lemma21_norms(&phi, &Lemma21Options::default()).unwrap();
    assert!((norms.lattice_norm - 1.0).abs() < 1e-12);
    // ‖tent‖_A = ∫ sinc² / 2π = 1, the truncation keeps all but the tail.
    assert!(norms.induced_truncated <= 1.0 + 1e-12);
    assert!(norms.induced_truncated + norms.tail_bound >= 1.0 - 1e-9);
    let report = check_lemma21_norm(&phi, &Lemma21Options::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Pass, "{}", report.summary_line());
}

#[test]
fn coarse_truncation_is_inconclusive_not_fail() {
    let phi = phi_1d(&[(1.0, 0.0), (-1.0, 0.0), (1.0, 0.0)], 0);
    let opts = Lemma21Options { points: 256, periods: 2, slack: 1e-6 };
    let report = check_lemma21_norm(&phi, &opts).unwrap();
    assert_eq!(report.verdict, Verdict::Inconclusive, "{}", report.summary_line());
}

#[test]
fn positive_definite_functions_have_lattice_norm_phi_zero() {
    let phi = autocorrelation(&[0.5, -0.3, 0.8, 0.1]);
    let norm = a_norm_abelian(&phi, 2048).unwrap();
    assert!((norm - phi.eval(&[0]).re).abs() < 1e-10);
}

#[test]
fn gram_lift_reproduces_induced_function() {
    // φ(m) = ⟨ξ(n), η(n+m)⟩ with ξ(n) = δ_n, η(n) = Σ_k φ(k)δ_{n-k}.
    let phi = phi_1d(&[(0.2, 0.0), (1.0, 0.3), (-0.4, 0.1)], -1);
    let width = 40;
    let basis = |n: i64| -> Vec<Complex64> { (-width..=width).map(|k| if k == n { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect() };
    let xi = |g: &[i64]| basis(g[0]);
    let eta = |g: &[i64]| -> Vec<Complex64> { (-width..=width).map(|k| phi.eval(&[g[0] - k]).conj()).collect() };
    for &(x, y) in &[(0.1, 0.9), (-1.3, 0.2), (2.0, 2.5)] {
        let lift = gram_lift(&phi, &xi, &eta, &[x], &[y]).unwrap();
        assert!((lift.inner - lift.induced).norm() < 1e-12, "{lift:?}");
        assert!(lift.xi_hat_norm <= lift.xi_max_norm + 1e-12);
    }
}

#[test]
fn gram_lift_rejects_wrong_vectors() {
    let phi = LatticeFunction::delta(&[0]);
    let one = |_: &[i64]| vec![c(1.0, 0.0)];
    assert!(gram_lift(&phi, &one, &one, &[0.2], &[1.7]).is_err());
}

proptest! {
    #[test]
    fn decompose_round_trips(x in -1e6f64..1e6, y in -50.0f64..50.0) {
        let lattice = LatticePair::new(2).unwrap();
        let (omega, gamma) = lattice.decompose(&[x, y]).unwrap();
        for (k, v) in [x, y].iter().enumerate() {
            prop_assert!((0.0..1.0).contains(&omega[k]));
            prop_assert!((omega[k] + gamma[k] as f64 - v).abs() <= 1e-9 * v.abs().max(1.0));
        }
    }

    #[test]
    fn averaging_formula_is_exact(
        values in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..6),
        offset in -3i64..3,
        x in -4.0f64..4.0,
        y in -4.0f64..4.0,
    ) {
        let phi = phi_1d(&values, offset);
        let report = check_formula_p20(&phi, &[x], &[y], 16).unwrap();
        prop_assert!(report.pass, "{}", report.summary_line());
    }

    #[test]
    fn induction_is_linear(
        a in prop::collection::vec(-1.0f64..1.0, 3),
        b in prop::collection::vec(-1.0f64..1.0, 3),
        s in -2.0f64..2.0,
        t in -3.0f64..3.0,
    ) {
        let lattice = LatticePair::new(1).unwrap();
        let fa = phi_1d(&a.iter().map(|&v| (v, 0.0)).collect::<Vec<_>>(), -1);
        let fb = phi_1d(&b.iter().map(|&v| (v, 0.0)).collect::<Vec<_>>(), -1);
        let sum = phi_1d(&a.iter().zip(&b).map(|(&p, &q)| (p + s * q, 0.0)).collect::<Vec<_>>(), -1);
        let lhs = lattice.induce(&sum).unwrap().eval(&[t]);
        let rhs = lattice.induce(&fa).unwrap().eval(&[t]) + lattice.induce(&fb).unwrap().eval(&[t]) * s;
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn induction_preserves_positive_definiteness(
        f in prop::collection::vec(-1.0f64..1.0, 1..5),
        points in prop::collection::vec(-5.0f64..5.0, 2..8),
    ) {
        let phi = autocorrelation(&f);
        let induced = LatticePair::new(1).unwrap().induce(&phi).unwrap();
        let n = points.len();
        let m = ComplexMatrix::from_fn(n, n, |i, j| induced.eval(&[points[i] - points[j]]));
        let eig = hermitian_eigen(&m, 1e-12).unwrap();
        let scale = phi.eval(&[0]).re.max(1e-12);
        prop_assert!(eig.values.iter().all(|&v| v >= -1e-10 * scale), "{:?}", eig.values);
    }

    #[test]
    fn translation_preserves_integral(
        raw in prop::collection::vec(0.01f64..0.99, 0..6),
        values in prop::collection::vec(-3.0f64..3.0, 7),
        x in -10.0f64..10.0,
    ) {
        let mut cuts = raw;
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        let step = StepFunction::new(cuts.clone(), values[..cuts.len() + 1].to_vec()).unwrap();
        prop_assert!((step.integral_translated(x) - step.integral()).abs() < 1e-12);
    }
}
