//! Herz–Schur matrices and sampled norm bounds.

use cbap::groups::{GroupElement, GroupKind};
use cbap::multiplier::{herz_schur_matrix, m0a_lower_bound, GroupFunction, MultiplierSpec, SampledMultiplier};
use cbap::schur::{schur_norm, schur_norm_grid_search};
use num_complex::Complex64;
use proptest::prelude::*;

fn z_set(ns: &[i64]) -> Vec<GroupElement> {
    ns.iter().map(|&n| GroupElement::Z(n)).collect()
}

fn pair_indicator() -> GroupFunction {
    Box::new(|g| Ok(Complex64::new(if matches!(g, GroupElement::Z(0) | GroupElement::Z(1)) { 1.0 } else { 0.0 }, 0.0)))
}

#[test]
fn positive_definite_functions_have_norm_phi_at_identity() {
    for json in [
        r#"{"group":"Z","kind":"gaussian","sigma":1.0}"#,
        r#"{"group":"R","kind":"character","alpha":0.7}"#,
        r#"{"group":"Heis3","kind":"constant","value":2.5}"#,
        r#"{"group":"Dix4","kind":"delta","set_size":6}"#,
    ] {
        let spec = MultiplierSpec::from_json_str(json).unwrap();
        let phi_e = (spec.function())(&spec.group.identity()).unwrap().re;
        let bound = m0a_lower_bound(&spec.sampled(4, 3).unwrap(), 1e-6).unwrap();
        for v in &bound.per_set {
            assert!((v - phi_e).abs() < 1e-5 * phi_e.max(1.0), "{json}: {v} vs {phi_e}");
        }
    }
}

#[test]
fn two_point_indicator_matches_grid_oracle() {
    let m = herz_schur_matrix(&z_set(&[0, 1]), pair_indicator().as_ref()).unwrap();
    let oracle = schur_norm_grid_search(&m, 400).unwrap();
    assert!((oracle - 2.0 / 3f64.sqrt()).abs() < 1e-6);
    let (norm, _) = schur_norm(&m, 1e-6).unwrap();
    assert!((norm - oracle).abs() < 1e-5, "{norm} vs {oracle}");
}

#[test]
fn mismatched_group_is_rejected() {
    let sets = vec![vec![GroupElement::Z(0), GroupElement::R(1.0)]];
    assert!(SampledMultiplier::new(GroupKind::Z, pair_indicator(), sets).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adding_points_never_lowers_the_norm(
        mut base in prop::collection::btree_set(-6i64..6, 2..5),
        extra in -6i64..6,
    ) {
        let phi = pair_indicator();
        let small: Vec<i64> = base.iter().copied().collect();
        base.insert(extra);
        let large: Vec<i64> = base.iter().copied().collect();
        let a = schur_norm(&herz_schur_matrix(&z_set(&small), phi.as_ref()).unwrap(), 1e-6).unwrap().0;
        let b = schur_norm(&herz_schur_matrix(&z_set(&large), phi.as_ref()).unwrap(), 1e-6).unwrap().0;
        prop_assert!(b >= a - 2e-6, "{a} -> {b}");
    }

    #[test]
    fn translation_invariance(ns in prop::collection::btree_set(-5i64..5, 2..5), shift in -20i64..20) {
        let phi = pair_indicator();
        let a = herz_schur_matrix(&z_set(&ns.iter().copied().collect::<Vec<_>>()), phi.as_ref()).unwrap();
        let b = herz_schur_matrix(&z_set(&ns.iter().map(|n| n + shift).collect::<Vec<_>>()), phi.as_ref()).unwrap();
        prop_assert_eq!(a, b);
    }
}
