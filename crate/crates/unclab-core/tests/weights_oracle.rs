//! Cross-checks of the weight-integral closed forms against quadrature and
//! against each other, plus randomized structural properties.

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use unclab_core::real::Real;
use unclab_core::weights::{integral_x_to_inf, integral_zero_to_x};
use unclab_core::{BrokenWeight, Ext, IntegralAsym};

fn w(a1: f64, a2: f64) -> BrokenWeight {
    BrokenWeight::new(Real::from_f64(a1), Real::from_f64(a2))
}

#[test]
fn closed_forms_match_quadrature_on_random_cases() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut checked = 0;
    while checked < 250 {
        let a1 = rng.gen_range(-3.0..3.0);
        let a2 = rng.gen_range(-3.0..3.0);
        let x = 10f64.powf(rng.gen_range(-3.0..3.0));
        let a = w(a1, a2);
        if a1 > -0.999 {
            let exact = integral_zero_to_x(a, x).unwrap().0.expect_finite();
            let quad = common::quad_integral_zero_to_x(a, x);
            assert!(
                (exact - quad).abs() <= 1e-8 * quad.abs(),
                "zero_to_x mismatch at A=({a1},{a2}), x={x}: {exact} vs {quad}"
            );
        }
        if a2 > 1.001 {
            let exact = integral_x_to_inf(a, x).unwrap().0.expect_finite();
            let quad = common::quad_integral_x_to_inf(a, x);
            assert!(
                (exact - quad).abs() <= 1e-8 * quad.abs(),
                "x_to_inf mismatch at A=({a1},{a2}), x={x}: {exact} vs {quad}"
            );
        }
        checked += 1;
    }
}

#[test]
fn tail_integral_equals_substituted_head_integral() {
    // u = 1/y turns int_x^inf y^{-A} dy into int_0^{1/x} u^{A^T - 2} du,
    // so the two closed forms must agree through entirely different branches.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for _ in 0..500 {
        let a1 = rng.gen_range(-3.0..3.0);
        let a2 = rng.gen_range(1.1..3.0);
        let x = 10f64.powf(rng.gen_range(-2.5..2.5));
        let a = w(a1, a2);
        let lhs = integral_x_to_inf(a, x).unwrap().0.expect_finite();
        let sub = a.transpose().shift(Real::int(-2));
        let rhs = integral_zero_to_x(sub, 1.0 / x).unwrap().0.expect_finite();
        assert!(
            (lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1e-300),
            "substitution identity failed at A=({a1},{a2}), x={x}"
        );
    }
}

/// Probes restricted to the regime where the classified form is two-sided:
/// the extra log term rides on top of the power only on its own side of 1.
fn probes_for(asym: &IntegralAsym) -> &'static [f64] {
    match asym {
        IntegralAsym::PowerPlusLog {
            log_near_zero: false,
            ..
        } => &[10.0, 1e2, 1e3],
        IntegralAsym::PowerPlusLog {
            log_near_zero: true,
            ..
        } => &[1e-3, 1e-2, 1e-1],
        _ => &[1e-3, 1e-1, 1.0, 10.0, 1e3],
    }
}

#[test]
fn growth_classification_brackets_the_exact_value() {
    // Exponents of moderate size keep the implied constants within 3.
    let heads = [
        w(-0.4, -0.4),
        w(0.0, 0.0),
        w(0.5, 1.5),
        w(1.5, -0.4),
        w(0.5, -1.0),  // log growth
        w(1.0, -1.0),  // log growth
        w(0.0, -2.0),  // bounded tail
        w(1.5, -1.5),  // bounded tail
    ];
    for a in heads {
        let asym = integral_zero_to_x(a, 1.0).unwrap().1;
        for &x in probes_for(&asym) {
            let exact = integral_zero_to_x(a, x).unwrap().0.expect_finite();
            let model = match asym.eval(x) {
                Ext::Finite(v) => v,
                Ext::Infinite => panic!("finite case classified infinite"),
            };
            let ratio = exact / model;
            assert!(
                (1.0 / 3.0..=3.0).contains(&ratio),
                "zero_to_x bracket failed for A={a}, x={x}: ratio {ratio}"
            );
        }
    }
    let tails = [
        w(-0.5, 2.0),
        w(0.0, 2.5),
        w(0.5, 3.0),
        w(1.0, 2.0),   // log_+(1/x) term
        w(1.0, 3.0),   // log_+(1/x) term
        w(2.0, 2.0),   // pure power on both sides
        w(3.0, 2.5),
    ];
    for a in tails {
        let asym = integral_x_to_inf(a, 1.0).unwrap().1;
        for &x in probes_for(&asym) {
            let exact = integral_x_to_inf(a, x).unwrap().0.expect_finite();
            let model = match asym.eval(x) {
                Ext::Finite(v) => v,
                Ext::Infinite => panic!("finite case classified infinite"),
            };
            let ratio = exact / model;
            assert!(
                (1.0 / 3.0..=3.0).contains(&ratio),
                "x_to_inf bracket failed for A={a}, x={x}: ratio {ratio}"
            );
        }
    }
}

#[test]
fn divergence_boundaries_are_sharp() {
    // Exactly at a1 = -1 the head integral diverges; a hair above it does not.
    let (v, asym) = integral_zero_to_x(w(-1.0, 0.0), 0.5).unwrap();
    assert_eq!(v, Ext::Infinite);
    assert_eq!(asym, IntegralAsym::Infinite);
    let (v, _) = integral_zero_to_x(w(-1.0 + 1e-9, 0.0), 0.5).unwrap();
    assert!(v.is_finite());

    // Same for the tail at a2 = 1.
    let (v, _) = integral_x_to_inf(w(0.0, 1.0), 2.0).unwrap();
    assert_eq!(v, Ext::Infinite);
    let (v, _) = integral_x_to_inf(w(0.0, 1.0 + 1e-9), 2.0).unwrap();
    assert!(v.is_finite());
}

fn sixteenth() -> impl Strategy<Value = Real> {
    // Exponents on a 1/16 grid in [-3, 3], avoiding -1 where integrals flip.
    (-48i64..=48)
        .prop_filter("a != -1", |n| *n != -16)
        .prop_map(|n| Real::ratio(n, 16))
}

proptest! {
    #[test]
    fn transpose_is_an_involution(a1 in sixteenth(), a2 in sixteenth()) {
        let v = BrokenWeight { a1, a2 };
        prop_assert_eq!(v.transpose().transpose(), v);
    }

    #[test]
    fn eval_multiplies_under_exponent_addition(
        a1 in sixteenth(), a2 in sixteenth(),
        b1 in sixteenth(), b2 in sixteenth(),
        x in 1e-3f64..1e3,
    ) {
        let u = BrokenWeight { a1, a2 };
        let v = BrokenWeight { a1: b1, a2: b2 };
        let lhs = (u + v).eval(x).unwrap();
        let rhs = u.eval(x).unwrap() * v.eval(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-300));
    }

    #[test]
    fn head_integral_is_monotone_in_x(
        a1 in sixteenth(), a2 in sixteenth(),
        x in 1e-3f64..1e3, factor in 1.01f64..10.0,
    ) {
        prop_assume!(a1.gt3(Real::int(-1)));
        let a = BrokenWeight { a1, a2 };
        let lo = integral_zero_to_x(a, x).unwrap().0.expect_finite();
        let hi = integral_zero_to_x(a, x * factor).unwrap().0.expect_finite();
        prop_assert!(lo > 0.0);
        prop_assert!(hi > lo * (1.0 - 1e-12));
    }

    #[test]
    fn tail_integral_is_antitone_in_x(
        a1 in sixteenth(), a2 in sixteenth(),
        x in 1e-3f64..1e3, factor in 1.01f64..10.0,
    ) {
        prop_assume!(a2.gt3(Real::int(1)));
        let a = BrokenWeight { a1, a2 };
        let lo = integral_x_to_inf(a, x).unwrap().0.expect_finite();
        let hi = integral_x_to_inf(a, x * factor).unwrap().0.expect_finite();
        prop_assert!(hi > 0.0);
        prop_assert!(hi < lo * (1.0 + 1e-12));
    }
}
