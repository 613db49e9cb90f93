use polya_core::special::{
    bessel_j, bessel_j_and_prime, bessel_j_prime, bessel_j_with, binomial, factorial, gamma_fn,
    ln_gamma, EvalPolicy, Method, SpecialError,
};
use proptest::prelude::*;

// (ν, x, J_ν(x), J'_ν(x)) at 30 digits, rounded
const REFERENCE: &[(f64, f64, f64, f64)] = &[
    (0.0, 1.0, 0.76519768655796655145, -0.44005058574493351596),
    (0.0, 10.0, -0.2459357644513483352, -0.04347274616886143667),
    (0.0, 100.0, 0.019985850304223122424, 0.077145352014112158033),
    (1.0, 2.5, 0.49709410246427403801, -0.24722141745390761153),
    (0.5, 3.0, 0.065008182877375778114, -0.4668835179408624752),
    (2.5, 7.0, -0.28343665120169919822, -0.097824337863315263743),
    (
        5.0,
        1.0,
        0.00024975773021123443138,
        0.0012278503130537828869,
    ),
    (5.0, 30.0, -0.14324029551207707699, -0.028735617735974172796),
    (10.3, 12.0, 0.29965644392549726975, 0.0071093530832623580143),
    (40.0, 45.0, 0.12660062126820200267, -0.061896981762939562828),
    (
        40.0,
        200.0,
        -0.031932993297986605204,
        -0.046175511908832459476,
    ),
    (
        100.0,
        80.0,
        4.6065530648234773541e-6,
        3.5036060582489177539e-6,
    ),
    (0.0, 0.001, 0.999999750000015625, -0.00049999993750000261457),
    (3.0, 0.5, 0.0025637299945872440754, 0.015221643491159176855),
    (7.5, 1000.0, 0.0136001002125833954, -0.021258849247359417713),
];

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs().max(1e-300)
}

#[test]
fn matches_reference_table() {
    let p = EvalPolicy::default();
    for &(nu, x, j, jp) in REFERENCE {
        let (vj, vjp) = bessel_j_and_prime(nu, x, &p).unwrap();
        assert!(close(vj, j, 1e-12), "J_{nu}({x}) = {vj}, want {j}");
        assert!(close(vjp, jp, 1e-11), "J'_{nu}({x}) = {vjp}, want {jp}");
        assert_eq!(bessel_j(nu, x, &p).unwrap(), vj);
        assert_eq!(bessel_j_prime(nu, x, &p).unwrap(), vjp);
    }
}

#[test]
fn half_integer_orders_are_elementary() {
    let p = EvalPolicy::default();
    for &x in &[0.3, 1.0, 4.0, 17.5, 60.0] {
        let j_half = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin();
        assert!(close(bessel_j(0.5, x, &p).unwrap(), j_half, 1e-13));
        let j_3half = (2.0 / (std::f64::consts::PI * x)).sqrt() * (x.sin() / x - x.cos());
        assert!(close(bessel_j(1.5, x, &p).unwrap(), j_3half, 1e-12));
    }
}

#[test]
fn methods_agree_where_both_apply() {
    let p = EvalPolicy::default();
    for &(nu, x) in &[(0.0, 3.0), (2.0, 5.0), (7.5, 6.0)] {
        let s = bessel_j_with(nu, x, Method::Series, &p).unwrap();
        let m = bessel_j_with(nu, x, Method::Recurrence, &p).unwrap();
        assert!(close(s, m, 1e-12), "nu={nu} x={x}: {s} vs {m}");
    }
    for &(nu, x) in &[(0.0, 150.0), (3.0, 200.0)] {
        let h = bessel_j_with(nu, x, Method::Hankel, &p).unwrap();
        let m = bessel_j_with(nu, x, Method::Recurrence, &p).unwrap();
        assert!((h - m).abs() < 1e-13, "nu={nu} x={x}: {h} vs {m}");
    }
}

#[test]
fn value_at_zero() {
    let p = EvalPolicy::default();
    assert_eq!(bessel_j(0.0, 0.0, &p).unwrap(), 1.0);
    assert_eq!(bessel_j(2.0, 0.0, &p).unwrap(), 0.0);
    assert_eq!(bessel_j_prime(1.0, 0.0, &p).unwrap(), 0.5);
}

#[test]
fn rejects_bad_input() {
    let p = EvalPolicy::default();
    assert!(matches!(
        bessel_j(-1.0, 1.0, &p),
        Err(SpecialError::InvalidOrder(_))
    ));
    assert!(matches!(
        bessel_j(1.0, -1.0, &p),
        Err(SpecialError::InvalidArgument(_))
    ));
    assert!(bessel_j(1.0, f64::NAN, &p).is_err());
    assert!(EvalPolicy::new(12.0, 0.0, 100).is_err());
}

#[test]
fn gamma_and_combinatorics() {
    assert!(close(
        gamma_fn(0.5).unwrap(),
        std::f64::consts::PI.sqrt(),
        1e-14
    ));
    assert!(close(
        gamma_fn(2.5).unwrap(),
        0.75 * std::f64::consts::PI.sqrt(),
        1e-14
    ));
    assert!(close(gamma_fn(10.0).unwrap(), 362_880.0, 1e-14));
    assert!(close(
        ln_gamma(100.0).unwrap(),
        359.13420536957539878,
        1e-14
    ));
    assert_eq!(factorial(10), 3_628_800.0);
    assert_eq!(binomial(10, 3), 120);
    assert_eq!(binomial(56, 11), 148_902_215_280);
    assert_eq!(binomial(4, 7), 0);
    assert_eq!(binomial(5, 0), 1);
}

proptest! {
    #[test]
    fn derivative_matches_difference_quotient(nu in 0.0f64..30.0, x in 0.5f64..120.0) {
        let p = EvalPolicy::default();
        let h = 1e-5 * x.max(1.0);
        let fd = (bessel_j(nu, x + h, &p).unwrap() - bessel_j(nu, x - h, &p).unwrap()) / (2.0 * h);
        let d = bessel_j_prime(nu, x, &p).unwrap();
        prop_assert!((fd - d).abs() < 1e-7, "nu={} x={} fd={} d={}", nu, x, fd, d);
    }

    #[test]
    fn three_term_recurrence(nu in 1.0f64..40.0, x in 0.5f64..150.0) {
        let p = EvalPolicy::default();
        let lhs = bessel_j(nu - 1.0, x, &p).unwrap() + bessel_j(nu + 1.0, x, &p).unwrap();
        let rhs = 2.0 * nu / x * bessel_j(nu, x, &p).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-11 * (1.0 + rhs.abs() + 2.0 * nu / x), "nu={} x={}", nu, x);
    }

    #[test]
    fn bounded_by_one(nu in 0.0f64..60.0, x in 0.0f64..500.0) {
        let v = bessel_j(nu, x, &EvalPolicy::default()).unwrap();
        prop_assert!(v.abs() <= 1.0 + 1e-14);
    }
}
