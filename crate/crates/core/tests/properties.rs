use gjms_core::closed_form::logdet_gjms;
use gjms_core::exact::{binomial, int};
use gjms_core::expr::ZetaExpr;
use gjms_core::precision::{evaluate, PrecisionContext};
use gjms_core::product_rules::{logdet_via_product, product_rule};
use gjms_core::quadrature::{
    integrand_chebyshev, integrand_main, logdet_quadrature, logdet_quadrature_chebyshev,
    QuadratureConfig, Scheme,
};
use proptest::prelude::*;

fn sphere_cell(d_max: i64) -> impl Strategy<Value = (i64, i64)> {
    (1..=(d_max - 1) / 2).prop_flat_map(|h| (Just(2 * h + 1), 1..=h))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_rule_equals_closed_form((d, k) in sphere_cell(29)) {
        prop_assert_eq!(logdet_via_product(d, k).unwrap(), logdet_gjms(d, k).unwrap());
    }

    #[test]
    fn rule_shape((d, k) in sphere_cell(41)) {
        let rule = product_rule(d, k).unwrap();
        prop_assert_eq!(rule.factors.len() as i64, k);
        prop_assert_eq!(&rule.factors[0].exponent, &num_bigint::BigInt::from(k));
        prop_assert!(rule.smallest_dimension() >= 3);
        for (i, f) in rule.factors.iter().enumerate() {
            prop_assert_eq!(f.dimension, d - 2 * i as i64);
            // Factor on dimension d - 2k + 2 + 2i has exponent C(2k-1-i, i).
            let from_low = (k - 1 - i as i64) as u64;
            prop_assert_eq!(&f.exponent, &binomial(2 * k as u64 - 1 - from_low, from_low as i64));
        }
    }

    #[test]
    fn json_round_trip((d, k) in sphere_cell(31), scale in -50i64..50) {
        let e = logdet_gjms(d, k).unwrap().scale(&int(scale));
        let json = e.to_json();
        let back = ZetaExpr::from_json(&json).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(back.to_json(), json);
    }

    #[test]
    fn chebyshev_integrand_pointwise((d, k) in sphere_cell(25), lx in -3.0f64..(50f64).log10()) {
        let x = 10f64.powf(lx);
        let a = integrand_main(x, d, k);
        let b = integrand_chebyshev(x, d, k);
        prop_assert!((a - b).abs() <= 1e-13 * a.abs(), "x={} {} {}", x, a, b);
    }

    #[test]
    fn integrands_finite_far_out((d, k) in sphere_cell(41), x in 50.0f64..1e4) {
        let a = integrand_main(x, d, k);
        prop_assert!(a.is_finite() && a >= 0.0);
        prop_assert!(integrand_chebyshev(x, d, k).is_finite());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn chebyshev_quadrature_agrees((d, k) in sphere_cell(17)) {
        let cfg = QuadratureConfig::default();
        let a = logdet_quadrature(d, k, &cfg).unwrap().value;
        let b = logdet_quadrature_chebyshev(d, k, &cfg).unwrap().value;
        prop_assert!((a - b).abs() <= 2.0 * cfg.abs_tol, "{} {}", a, b);
    }

    #[test]
    fn schemes_agree((d, k) in sphere_cell(15)) {
        let gk = logdet_quadrature(d, k, &QuadratureConfig::with_scheme(Scheme::GaussKronrod)).unwrap();
        let ts = logdet_quadrature(d, k, &QuadratureConfig::with_scheme(Scheme::TanhSinh)).unwrap();
        prop_assert!((gk.value - ts.value).abs() <= 2e-12, "{} {}", gk.value, ts.value);
    }

    #[test]
    fn quadrature_tracks_closed_form((d, k) in sphere_cell(19)) {
        let exact = evaluate(&logdet_gjms(d, k).unwrap(), &PrecisionContext::default()).to_f64();
        let r = logdet_quadrature(d, k, &QuadratureConfig::default()).unwrap();
        prop_assert!((r.value - exact).abs() <= 1e-9);
        prop_assert!(r.error_estimate <= 1e-12);
    }
}

#[test]
fn precision_is_stable_across_contexts() {
    let e = logdet_gjms(13, 3).unwrap();
    let lo = evaluate(&e, &PrecisionContext::new(20).unwrap()).to_significant(12);
    let hi = evaluate(&e, &PrecisionContext::new(120).unwrap()).to_significant(12);
    assert_eq!(lo, hi);
    assert_eq!(hi, "-0.000100155494040");
}
