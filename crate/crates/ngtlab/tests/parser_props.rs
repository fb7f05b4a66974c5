//! Property tests for the expression language: print/parse round
//! trips, derivative correctness against finite differences, and
//! linearity of differentiation.

use proptest::prelude::*;

use ngtlab::expr::{self, central_fd, parse, Expr, UnaryFn};

fn coords() -> Vec<String> {
    vec!["x1".into(), "x2".into(), "x3".into()]
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-16i32..=16).prop_map(|k| expr::cnum(k as f64 / 4.0)),
        (0usize..3).prop_map(|i| expr::var(&format!("x{}", i + 1), i)),
    ];
    leaf.prop_recursive(3, 32, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| expr::mul(a, b)),
            // Denominators bounded away from zero on the sample box.
            (inner.clone(), inner.clone(), 2i32..5).prop_map(|(a, d, c)| {
                expr::div(a, expr::add(expr::cnum(c as f64), expr::powi(d, 2)))
            }),
            (inner.clone(), 2i32..4).prop_map(|(a, n)| expr::powi(a, n)),
            inner.clone().prop_map(|a| expr::unary(UnaryFn::Sin, a)),
            inner.clone().prop_map(|a| expr::unary(UnaryFn::Cos, a)),
            inner.prop_map(|a| expr::unary(UnaryFn::Atan, a)),
        ]
    })
}

const POINTS: [[f64; 3]; 3] = [[0.3, -0.7, 0.1], [-0.9, 0.2, 0.8], [0.0, 0.5, -0.4]];

proptest! {
    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let printed = e.to_string();
        let reparsed = parse(&printed, &coords()).unwrap();
        prop_assert_eq!(&printed, &reparsed.to_string());
        for p in &POINTS {
            let a = e.evaluate(p).unwrap();
            let b = reparsed.evaluate(p).unwrap();
            prop_assert!(a == b || (a.is_nan() && b.is_nan()), "{} vs {} for `{}`", a, b, printed);
        }
    }

    #[test]
    fn derivative_matches_finite_differences(e in arb_expr()) {
        for p in &POINTS {
            for m in 0..3 {
                let sym = e.differentiate(m).evaluate(p).unwrap();
                let fd = central_fd(&e, p, m).unwrap();
                let rel = (sym - fd).abs() / sym.abs().max(1.0);
                prop_assert!(rel <= 1e-5, "d/dx{} of `{}`: sym {} fd {}", m + 1, e, sym, fd);
            }
        }
    }

    #[test]
    fn differentiation_is_linear(a in arb_expr(), b in arb_expr()) {
        for p in &POINTS {
            for m in 0..3 {
                let lhs = expr::add(a.clone(), b.clone()).differentiate(m).evaluate(p).unwrap();
                let rhs = a.differentiate(m).evaluate(p).unwrap()
                    + b.differentiate(m).evaluate(p).unwrap();
                prop_assert!(
                    (lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()),
                    "linearity: {} vs {}",
                    lhs,
                    rhs
                );
            }
        }
    }

    #[test]
    fn constants_have_zero_derivative(k in -1e3f64..1e3) {
        let e = expr::cnum(k);
        for m in 0..3 {
            prop_assert_eq!(e.differentiate(m).evaluate(&POINTS[0]).unwrap(), 0.0);
        }
    }
}
