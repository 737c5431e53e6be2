//! Randomized invariants, 1000 cases each unless noted.

use hminimal::flow::{picard, PicardOptions, PlanarField};
use hminimal::heis::{dilate, frame_decompose};
use hminimal::plateau::{access_from_points, SpanRule};
use hminimal::ruled::{persistent_family, PersistentKind, RuledSurface, SeedCurve};
use hminimal::{Dual, Expr, HPoint};
use num_rational::Ratio;
use proptest::prelude::*;

fn v() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn pt() -> impl Strategy<Value = HPoint<f64>> {
    (v(), v(), v()).prop_map(|(x, y, t)| HPoint::new(x, y, t))
}

fn rat() -> impl Strategy<Value = Ratio<i64>> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| Ratio::new(n, d))
}

fn close(a: &HPoint<f64>, b: &HPoint<f64>, tol: f64) -> bool {
    (a.x - b.x).abs() <= tol && (a.y - b.y).abs() <= tol && (a.t - b.t).abs() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn associative_exact_over_rationals(a in (rat(), rat(), rat()), b in (rat(), rat(), rat()), c in (rat(), rat(), rat())) {
        let (a, b, c) = (HPoint::new(a.0, a.1, a.2), HPoint::new(b.0, b.1, b.2), HPoint::new(c.0, c.1, c.2));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&a.inv()), HPoint::identity());
    }

    #[test]
    fn group_identities_in_floats(a in pt(), b in pt(), c in pt(), s in 0.1..5.0f64) {
        prop_assert!(close(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c)), 1e-12 * 1e3));
        prop_assert!(close(&a.mul(&a.inv()), &HPoint::identity(), 1e-12));
        let lhs = dilate(s, &a.mul(&b)).unwrap();
        let rhs = dilate(s, &a).unwrap().mul(&dilate(s, &b).unwrap());
        prop_assert!(close(&lhs, &rhs, 1e-12 * 1e4));
    }

    #[test]
    fn access_is_antisymmetric(a in (v(), v(), v()), b in (v(), v(), v())) {
        let (a, b) = ([a.0, a.1, a.2], [b.0, b.1, b.2]);
        prop_assert_eq!(access_from_points(&a, &b), -access_from_points(&b, &a));
        prop_assert_eq!(access_from_points(&a, &a), 0.0);
    }

    #[test]
    fn span_rules_are_horizontal(a in (v(), v(), v()), b in (v(), v(), v()), s in 0.0..1.0f64) {
        let r = SpanRule { t: 0.0, phi: 0.0, a: [a.0, a.1, a.2], b: [b.0, b.1, b.2] };
        let p = r.at(s);
        let d = [b.0 - a.0, b.1 - a.1, 0.5 * (a.0 * (b.1 - a.1) - (b.0 - a.0) * a.1)];
        let w = frame_decompose(&HPoint::new(p[0], p[1], p[2]), d).w;
        prop_assert!(w.abs() <= 1e-10 * (1.0 + d[0].abs() + d[1].abs()).powi(2), "{}", w);
    }

    #[test]
    fn quadratic_gauss_map_is_unit(m in -2.0..2.0f64, a in -2.0..2.0f64, b in -2.0..2.0f64, x in -2.0..2.0f64, y in -2.0..2.0f64) {
        let k = PersistentKind::Quadratic { m, a, b, x0: 0.3, y0: -0.1 };
        let p = persistent_family(k, [-2.0, 2.0, -2.0, 2.0], None).unwrap();
        let g = p.horizontal_gauss(x, y).unwrap();
        if let Some(n) = g.nu {
            prop_assert!((n[0].hypot(n[1]) - 1.0).abs() <= 1e-14);
        }
    }
}

fn helix_surface(k: f64, c: f64) -> RuledSurface {
    let seed = SeedCurve::from_exprs("cos(s)", "sin(s)", [-3.0, 3.0]).unwrap();
    RuledSurface::new(seed, &format!("({k:?})*s + ({c:?})*sin(s)"), [-0.9, 0.9]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ruled_lift_rules_horizontal_and_jacobian(k in -2.0..2.0f64, c in -2.0..2.0f64, s in -3.0..3.0f64, r in -0.9..0.9f64) {
        let surf = helix_surface(k, c);
        let by_r = surf.lift_t(Dual::constant(s), Dual::variable(r)).unwrap();
        let by_s = surf.lift_t(Dual::variable(s), Dual::constant(r)).unwrap();
        let base = HPoint::new(by_r[0].v, by_r[1].v, by_r[2].v);
        let w = frame_decompose(&base, [by_r[0].d, by_r[1].d, by_r[2].d]).w;
        prop_assert!(w.abs() <= 1e-10, "{}", w);
        let det = by_s[0].d * by_r[1].d - by_s[1].d * by_r[0].d;
        let (_, jac) = surf.param_f(s, r).unwrap();
        prop_assert!((det - jac).abs() <= 1e-8, "{} vs {}", det, jac);
        prop_assert!((jac - (r * surf.seed.kappa(s).unwrap() - 1.0)).abs() <= 1e-12);
    }

    #[test]
    fn expr_display_round_trips(a in -5.0..5.0f64, b in 0.1..3.0f64, x in -2.0..2.0f64, y in 0.1..2.0f64) {
        let src = format!("{a:?}*sin(x)^2 - exp(-y/{b:?}) + sqrt(y)*atan2(y, x) - x/(1 + y^2)");
        let e = Expr::parse(&src, &["x", "y"]).unwrap();
        let again = Expr::parse(&e.to_string(), &["x", "y"]).unwrap();
        prop_assert_eq!(e.eval(&[x, y]).unwrap(), again.eval(&[x, y]).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn picard_curves_are_lipschitz(a in -1.0..1.0f64, b in -1.0..1.0f64, c in -1.0..1.0f64, d in -1.0..1.0f64) {
        let f = PlanarField::from_exprs(&format!("({a:?})*x + ({b:?})*y + 0.3"), &format!("({c:?})*x + ({d:?})*y"), [-3.0, 3.0, -3.0, 3.0]).unwrap();
        let curve = picard(&f, [0.2, -0.1], &PicardOptions { t_max: 1.0, intervals: 64, ..Default::default() }).unwrap();
        prop_assert!(curve.lipschitz_excess(f.sup_norm()) <= 1e-10);
    }
}
