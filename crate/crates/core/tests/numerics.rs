//! Numeric kernels against independent oracles, plus their algebraic invariants.

mod common;

use cbap::numerics::linalg::psd_project;
use cbap::numerics::{operator_norm, pv_integral_1d, ComplexMatrix};
use common::{jacobi_singular_values, random_matrix, rng};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn operator_norm_matches_jacobi_svd() {
    let mut r = rng(11);
    for _ in 0..20 {
        let m = random_matrix(&mut r, 8, 8);
        let oracle = jacobi_singular_values(&m)[0];
        let got = operator_norm(&m).unwrap();
        assert!((got - oracle).abs() <= 1e-10 * oracle, "{got} vs {oracle}");
    }
}

#[test]
fn iterative_norm_for_large_matrices() {
    let mut r = rng(5);
    let m = random_matrix(&mut r, 300, 280);
    let oracle = jacobi_singular_values(&m)[0];
    let got = operator_norm(&m).unwrap();
    assert!((got - oracle).abs() <= 1e-10 * oracle, "{got} vs {oracle}");
}

fn matrix_strategy(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_n, 1..=max_n).prop_flat_map(|(r, c)| {
        prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), r * c)
            .prop_map(move |v| ComplexMatrix::new(r, c, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
    })
}

fn hermitian_strategy(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix_strategy(max_n).prop_map(|m| {
        let n = m.rows().min(m.cols());
        let sq = m.block(0, 0, n, n);
        sq.add(&sq.adjoint()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_of_adjoint_is_identical(m in matrix_strategy(7)) {
        prop_assert_eq!(operator_norm(&m).unwrap(), operator_norm(&m.adjoint()).unwrap());
    }

    #[test]
    fn norm_is_absolutely_homogeneous(m in matrix_strategy(7), re in -5.0..5.0f64, im in -5.0..5.0f64) {
        let alpha = Complex64::new(re, im);
        let lhs = operator_norm(&m.scale(alpha)).unwrap();
        let rhs = alpha.norm() * operator_norm(&m).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300) + 1e-300);
    }

    #[test]
    fn projection_is_idempotent(h in hermitian_strategy(6)) {
        let p = psd_project(&h).unwrap();
        let pp = psd_project(&p).unwrap();
        prop_assert!(pp.frobenius_distance(&p).unwrap() < 1e-10);
    }

    #[test]
    fn odd_integrands_with_symmetric_poles_vanish(c in 0.1..0.9f64, k in 1..4i32, e in 0.005..0.04f64) {
        let f = |t: f64| Complex64::new(t.powi(2 * k - 1) / (t * t - c * c) * (-t * t).exp(), 0.0);
        let eps = e.min(0.4 * c).min(0.4 * (2.0 - c));
        let v = pv_integral_1d(f, -2.0, 2.0, &[-c, c], eps).unwrap();
        prop_assert!(v.norm() < 1e-12, "{}", v);
    }
}
