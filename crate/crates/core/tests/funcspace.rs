mod common;

use bessel_struve::funcspace::*;
use bessel_struve::kernel::Order;
use bessel_struve::numerics::richardson_derivative;
use common::*;
use proptest::prelude::*;

fn builtins() -> Vec<SmoothCompactFunction> {
    vec![
        make_poly_bump(1.0, 2).unwrap(),
        make_poly_bump(2.0, 3).unwrap(),
        make_poly_bump(0.7, 6).unwrap(),
        make_exp_bump(1.0).unwrap(),
        make_exp_bump(2.5).unwrap(),
    ]
}

#[test]
fn derivatives_agree_with_differences() {
    for f in builtins() {
        let a = f.support_radius();
        for n in 1..=f.max_derivative_order() {
            for i in 0..20 {
                let x = a * (-0.9 + 1.8 * i as f64 / 19.0);
                let value = f.eval(x, n);
                // steps shrink towards the edge, where exp_bump varies fastest
                let h = (0.02 * a).min(0.05 * (a - x.abs()));
                let num = richardson_derivative(|t| f.eval(t, n - 1), x, 1, h).value;
                let tol = 1e-7f64.max(1e-7 * value.abs());
                assert!((value - num).abs() <= tol, "{f:?} n={n} x={x}: {value} vs {num}");
            }
        }
    }
}

#[test]
fn poly_bump_matches_expanded_polynomial() {
    for &(a, m) in &[(1.0, 2u32), (2.0, 3), (1.3, 7)] {
        let f = make_poly_bump(a, m).unwrap();
        for n in 0..=m as usize - 1 {
            // the expanded reference cancels near the edge; compare on its scale
            let scale = (0..=100)
                .map(|i| poly_bump_ref(a, m, a * (-1.0 + 0.02 * i as f64), n).abs())
                .fold(1.0f64, f64::max);
            for i in 0..=10 {
                let x = a * (-1.0 + 0.2 * i as f64);
                let want = poly_bump_ref(a, m, x, n);
                let got = f.eval(x, n);
                assert!((got - want).abs() < 1e-12 * scale, "a={a} m={m} n={n} x={x}: {got} vs {want}");
            }
        }
        // derivatives below m vanish at the edge
        for n in 0..m as usize {
            assert!(f.eval(a, n).abs() < 1e-12 && f.eval(-a, n).abs() < 1e-12);
        }
    }
}

#[test]
fn values_are_continuous_across_the_edge() {
    for f in builtins() {
        let a = f.support_radius();
        for &edge in &[-a, a] {
            let inside = f.eval(edge * (1.0 - 1e-9), 0);
            let outside = f.eval(edge * (1.0 + 1e-9), 0);
            assert!((inside - outside).abs() < 1e-12);
        }
    }
}

#[test]
fn weighted_norm_against_reference() {
    for &alpha in &[-0.4, 0.0, 0.5, 1.7] {
        let o = Order::new(alpha).unwrap();
        let f = make_poly_bump(1.5, 3).unwrap();
        let got = weighted_l1_norm(&f, &o, 64).unwrap();
        let want = 2.0 * integrate(|x| poly_bump_ref(1.5, 3, x, 0) * x.powf(2.0 * alpha + 1.0), 0.0, 1.5);
        assert!((got - want).abs() < 1e-12 * want, "alpha={alpha}");
    }
}

#[test]
fn measure_density_is_even_and_non_negative() {
    let m = WeightedMeasure::new(Order::new(0.3).unwrap());
    for &x in &[0.0, 0.1, 1.0, 7.5] {
        assert!(m.density(x) >= 0.0);
        assert_eq!(m.density(x), m.density(-x));
    }
}

proptest! {
    #[test]
    fn no_leakage(a in 0.1f64..5.0, m in 2u32..9, t in 1.0f64..10.0, neg in any::<bool>()) {
        let x = if neg { -a * t } else { a * t };
        let x = if x.abs() == a { x * 1.5 } else { x };
        for f in [make_poly_bump(a, m).unwrap(), make_exp_bump(a).unwrap()] {
            for n in 0..=f.max_derivative_order() {
                prop_assert_eq!(f.eval(x, n), 0.0);
            }
        }
    }

    #[test]
    fn norm_is_reflection_invariant(alpha in -0.45f64..3.0, a in 0.2f64..3.0, skew in -0.9f64..0.9) {
        let o = Order::new(alpha).unwrap();
        let bump = make_poly_bump(a, 3).unwrap();
        let f = SmoothCompactFunction::custom(a, 0, move |x, _| bump.eval(x, 0) * (1.0 + skew * x / a));
        let n1 = weighted_l1_norm(&f, &o, 32).unwrap();
        let n2 = weighted_l1_norm(&f.reflected(), &o, 32).unwrap();
        prop_assert!((n1 - n2).abs() <= 1e-12 * n1.max(1e-300));
    }

    #[test]
    fn descriptor_json_round_trip(a in 0.1f64..10.0, m in 2u32..12) {
        let d = FunctionDescriptor::PolyBump { a, m };
        let s = serde_json::to_string(&d).unwrap();
        let back: FunctionDescriptor = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, d);
    }
}
