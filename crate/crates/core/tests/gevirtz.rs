use std::f64::consts::PI;

use lost_at_sea::gevirtz::{
    a_gamma_arc, a_gamma_arc_unchecked, a_gamma_mc, arcs_disjoint, check_lower_bound, sigma, trace_curve, TurningCurve,
    DEFAULT_PROBES,
};
use lost_at_sea::numerics::QuadratureSpec;
use lost_at_sea::objectives::DISK_STRAIGHT_MEAN;
use lost_at_sea::EscapeError;
use num_complex::Complex64;

fn hairpin() -> TurningCurve {
    let q = 0.4 * PI;
    TurningCurve::from_knots(
        vec![(0.0, 0.0), (0.05, q), (0.35, q), (0.45, -q), (0.75, -q), (0.85, q)],
        q,
    )
    .unwrap()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::with_abs_tol(1e-12)
}

#[test]
fn straight_line_equality() {
    let f = trace_curve(&TurningCurve::straight()).unwrap();
    assert_eq!(f.s_star, 2.0);
    for s in [0.1, 1.0, 1.9] {
        assert_eq!(f.lambda(s), s);
    }
    let a = a_gamma_arc(&f, &spec()).unwrap();
    assert!((a - DISK_STRAIGHT_MEAN).abs() < 1e-9, "{a}");
    let rep = check_lower_bound(&TurningCurve::straight()).unwrap();
    assert!(rep.holds && rep.slack.abs() < 1e-9);
}

#[test]
fn constant_curvature_chord_length() {
    let k = 0.05;
    let f = trace_curve(&TurningCurve::constant_curvature(k, 1.2).unwrap()).unwrap();
    for i in 1..=50 {
        let s = f.s_star * i as f64 / 50.0;
        assert!((f.lambda(s) - 2.0 / k * (k * s / 2.0).sin()).abs() < 1e-13);
    }
}

#[test]
fn lambda_monotone_for_flat_curves() {
    for c in [
        TurningCurve::constant_curvature(0.2, 0.4).unwrap(),
        TurningCurve::from_knots(vec![(0.0, 0.0), (0.5, 0.4), (1.0, -0.4), (1.5, 0.1)], 0.4).unwrap(),
    ] {
        assert!(trace_curve(&c).unwrap().lambda_increasing(10_000));
    }
}

#[test]
fn curved_arcs_exceed_the_bound() {
    let f = trace_curve(&TurningCurve::constant_curvature(0.05, 1.0).unwrap()).unwrap();
    assert!(a_gamma_arc(&f, &spec()).unwrap() > DISK_STRAIGHT_MEAN);
    let rep = check_lower_bound(&TurningCurve::constant_curvature(0.05, 1.0).unwrap()).unwrap();
    assert!(rep.holds && rep.slack > 0.0);
}

#[test]
fn arc_formula_matches_area_mean() {
    let f = trace_curve(&TurningCurve::constant_curvature(0.1, 1.0).unwrap()).unwrap();
    let arc = a_gamma_arc(&f, &spec()).unwrap();
    let mc = a_gamma_mc(&f, 400_000, 12).unwrap();
    assert!((arc - mc.point).abs() < 4.0 * mc.std_error, "{arc} vs {mc:?}");
    assert!(mc.point >= DISK_STRAIGHT_MEAN - 4.0 * mc.std_error);
    assert_eq!(mc.failures, 0);
}

#[test]
fn sigma_bounded_by_s_star() {
    let f = trace_curve(&TurningCurve::constant_curvature(0.3, 0.5).unwrap()).unwrap();
    let at_start = sigma(&f, Complex64::new(0.0, 0.0)).unwrap();
    assert!((0.0..=f.s_star).contains(&at_start));
    for z in [Complex64::new(-0.99, 0.0), Complex64::new(0.2, 0.9), Complex64::new(0.99, -0.05)] {
        let s = sigma(&f, z).unwrap();
        assert!((0.0..=f.s_star).contains(&s));
        assert!(((f.gamma(s) - z).norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn disjointness_probes() {
    let straight = trace_curve(&TurningCurve::straight()).unwrap();
    assert!(arcs_disjoint(&straight, DEFAULT_PROBES));
    let gentle = trace_curve(&TurningCurve::constant_curvature(0.05, 0.1).unwrap()).unwrap();
    assert!(arcs_disjoint(&gentle, DEFAULT_PROBES));
    let h = trace_curve(&hairpin()).unwrap();
    assert!(!arcs_disjoint(&h, DEFAULT_PROBES));
}

#[test]
fn arc_formula_refused_for_hairpin() {
    let h = trace_curve(&hairpin()).unwrap();
    assert_eq!(a_gamma_arc(&h, &spec()), Err(EscapeError::ArcsIntersect));
    assert_eq!(check_lower_bound(&hairpin()), Err(EscapeError::ArcsIntersect));
    // The formula still evaluates, and the area mean is still defined.
    let arc = a_gamma_arc_unchecked(&h, &spec()).unwrap();
    let mc = a_gamma_mc(&h, 200_000, 1).unwrap();
    assert!(arc.is_finite() && mc.point.is_finite());
}

#[test]
fn slack_grows_with_curvature() {
    let slacks: Vec<f64> = [0.01, 0.02, 0.05, 0.1]
        .iter()
        .map(|&k| check_lower_bound(&TurningCurve::constant_curvature(k, 1.0).unwrap()).unwrap().slack)
        .collect();
    for w in slacks.windows(2) {
        assert!(w[1] > w[0], "{slacks:?}");
    }
}

#[test]
fn invalid_curves() {
    assert!(TurningCurve::from_knots(vec![(0.0, 0.0)], PI / 2.0).is_err());
    assert!(TurningCurve::from_knots(vec![(0.0, 0.1)], 0.2).is_err());
    assert!(TurningCurve::from_knots(vec![(0.0, 0.0), (0.0, 0.1)], 0.2).is_err());
    assert!(TurningCurve::from_knots(vec![(0.0, 0.0), (1.0, 0.3)], 0.2).is_err());
}
