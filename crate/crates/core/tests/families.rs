use proptest::prelude::*;

use qha_core::families::{
    build_gamma_eta2, build_gamma_star, build_lambda_eta, build_lambda_family, dim_report, FamilySpec,
};
use qha_core::pipeline::{compute, Options};
use qha_core::FieldSpec;

const Q: FieldSpec = FieldSpec::Rationals;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Valid `(p, q, k, s)` with small parameters.
fn lambda_params() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (0usize..=2, 0usize..=2, 2usize..=5, 1usize..=4)
        .prop_filter("constraints", |&(_, _, k, s)| s < k && gcd(s, k) == 1 && gcd(s + 2, k) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn every_vertex_of_the_cycle_has_the_same_dimension((p, q, k, s) in lambda_params(), lam in 1i64..6) {
        let pres = build_lambda_family(Q, p, q, k, s, &Q.from_int(lam)).unwrap();
        let d = dim_report(&pres, None).unwrap();
        prop_assert!(d.admissible);
        for i in 1..=k {
            prop_assert_eq!(d.vertex(&format!("v{i}")), Some(2 * p + 2 * q + 4));
        }
    }

    #[test]
    fn lambda_eta_keeps_dimensions((p, q, k, s) in lambda_params(), t in -3i64..=3) {
        let base = dim_report(&build_lambda_family(Q, p, q, k, s, &Q.one()).unwrap(), None).unwrap();
        let eta = dim_report(&build_lambda_eta(Q, p, q, k, s, &Q.one(), &Q.from_int(t)).unwrap(), None).unwrap();
        prop_assert_eq!(base.per_vertex, eta.per_vertex);
    }

    #[test]
    fn hh2_is_one_when_s_is_small((p, q, k, s) in lambda_params(), lam in 1i64..4) {
        prop_assume!(p >= 1 && q >= 1 && s + 2 <= k);
        let pres = build_lambda_family(Q, p, q, k, s, &Q.from_int(lam)).unwrap();
        let out = compute(&pres, &Options::default()).unwrap();
        prop_assert_eq!(out.report.hh.hh2, 1);
        prop_assert_eq!(out.report.rank_d2, k - 1);
    }
}

#[test]
fn spec_builds_match_functions() {
    let a = FamilySpec::GammaStar { n: 3 }.build(Q).unwrap();
    assert_eq!(a.to_string(), build_gamma_star(Q, 3).unwrap().to_string());
}

#[test]
fn gamma_eta2_loses_dimension() {
    for n in 2..=5 {
        let base = dim_report(&build_gamma_star(Q, n).unwrap(), None).unwrap();
        for t in [1, 2, -1] {
            let d = dim_report(&build_gamma_eta2(Q, n, &Q.from_int(t)).unwrap(), None).unwrap();
            assert!(!d.admissible);
            assert!(d.total < base.total, "n = {n}, t = {t}");
        }
    }
}

#[test]
fn gamma_eta2_brute_force_counts() {
    // dim KQ/(I + J^L) counted independently for L beyond stabilisation.
    let d = |n| dim_report(&build_gamma_eta2(Q, n, &Q.one()).unwrap(), None).unwrap().total;
    assert_eq!(d(2), 14);
    assert_eq!(d(3), 20);
}

#[test]
fn gamma_dimensions() {
    for n in 1..=5 {
        let d = dim_report(&build_gamma_star(Q, n).unwrap(), None).unwrap();
        assert!(d.admissible);
        assert_eq!(d.total, [11, 18, 29, 44, 63][n - 1]);
    }
}
