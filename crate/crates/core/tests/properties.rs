use std::f64::consts::{FRAC_PI_2, PI};

use lost_at_sea::disk::{disk_classify, disk_path_length, DiskState, DiskStrategy};
use lost_at_sea::geom::{Heading, Point};
use lost_at_sea::gevirtz::{trace_curve, TurningCurve};
use lost_at_sea::numerics::{minimize, Bounds, MinimizeOptions};
use lost_at_sea::oracle::{raycast, realize, PathStrategy, Region};
use lost_at_sea::strip::{
    classify_strip3, normalize_state, strip2_conditions, strip2_path_length, strip3_path_length, theta0, StripState,
    Strategy2, Strategy3,
};
use lost_at_sea::zalgaller::{fit_two_segment, strategy2_polyline};
use lost_at_sea::CaseLabel;
use proptest::prelude::*;

fn closed_form_strategy() -> impl Strategy<Value = Strategy2> {
    (1.0001..3.0f64, 0.001..0.999f64).prop_map(|(r, f)| Strategy2 { r, alpha: FRAC_PI_2 - f * (1.0 / r).acos() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn strip2_cases_are_exhaustive(x in 0.0..=1.0f64, theta in 0.0..=PI, r in 0.0..4.0f64, alpha in 0.0..=PI) {
        let conds = strip2_conditions(StripState { x, theta }, Strategy2 { r, alpha });
        prop_assert!(conds.iter().any(|&c| c));
    }

    #[test]
    fn strip2_cases_are_disjoint_off_boundaries(x in 0.01..0.99f64, theta in 0.01..PI - 0.01, r in 0.05..4.0f64, alpha in 0.01..PI - 0.01) {
        let conds = strip2_conditions(StripState { x, theta }, Strategy2 { r, alpha });
        let n = conds.iter().filter(|&&c| c).count();
        // Overlaps only happen on measure-zero boundary sets.
        prop_assume!((x + r - 1.0).abs() > 1e-9 && (x - r).abs() > 1e-9);
        prop_assert!(n >= 1);
    }

    #[test]
    fn strip3_labels_within_domain(x in 0.0..=1.0f64, theta in 0.0..=PI, strat in closed_form_strategy(), s in 0.0..1.5f64, beta in 0.0..=PI) {
        let label = classify_strip3(StripState { x, theta }, Strategy3 { r: strat.r, alpha: strat.alpha, s, beta });
        prop_assert!(matches!(label, CaseLabel::Case1 | CaseLabel::Case5 | CaseLabel::Sub31 | CaseLabel::Sub32));
    }

    #[test]
    fn disk_labels_are_primed(x in 0.0..=1.0f64, theta in -PI..=PI, r in 0.0..=2.0f64, alpha in 0.0..=PI) {
        let label = disk_classify(DiskState { x, theta }, DiskStrategy { r, alpha });
        prop_assert!(matches!(label, CaseLabel::DiskCase1 | CaseLabel::DiskCase2));
    }

    #[test]
    fn reflection_symmetry(x in 0.0..=1.0f64, theta in -PI + 1e-3..-1e-3f64, r in 0.0..3.0f64, alpha in 0.0..=PI) {
        let strat = PathStrategy::Strip2(Strategy2 { r, alpha });
        let raw = realize(Region::Strip, Point::new(x, 0.0), theta, &strat);
        let n = normalize_state(x, theta).unwrap();
        prop_assert!(n.theta >= 0.0 && n.theta <= PI);
        let analytic = strip2_path_length(n, Strategy2 { r, alpha });
        if let (Ok(raw), Ok(a)) = (raw, analytic) {
            prop_assert!((raw.total_length - a).abs() <= 1e-9 * a.max(1.0), "{} vs {}", raw.total_length, a);
        }
    }

    #[test]
    fn beta_pi_collapses_to_two_segments(x in 0.0..=1.0f64, theta in 0.0..=PI, strat in closed_form_strategy(), s in 0.0..1.5f64) {
        let st = StripState { x, theta };
        let two = strip2_path_length(st, strat);
        let three = strip3_path_length(st, Strategy3 { r: strat.r, alpha: strat.alpha, s, beta: PI });
        if let (Ok(a), Ok(b)) = (two, three) {
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn theta0_root_residual(x in 0.0..=1.0f64, strat in closed_form_strategy(), s in 0.0..1.5f64) {
        if let Ok(t0) = theta0(x, strat.r, s, strat.alpha) {
            let res = 1.0 - x - strat.r * t0.cos() + s * (t0 + strat.alpha).cos();
            prop_assert!(res.abs() < 1e-12, "residual {res:e}");
        }
    }

    #[test]
    fn two_segment_fit_is_idempotent(r in 0.05..3.0f64, alpha in 0.0..PI - 1e-6, tail in 0.5..3.0f64) {
        let s = Strategy2 { r, alpha };
        let f = fit_two_segment(&strategy2_polyline(s, tail)).unwrap();
        prop_assert!((f.r - r).abs() < 1e-12 && (f.alpha - alpha).abs() < 1e-9, "{f:?} vs {s:?}");
    }

    #[test]
    fn disk_realizations_end_on_circle(x in 0.0..=1.0f64, theta in -PI..=PI, r in 0.0..=2.0f64, alpha in 0.0..=PI) {
        let strat = DiskStrategy { r, alpha };
        let real = realize(Region::Disk, Point::new(x, 0.0), theta, &PathStrategy::Disk2(strat)).unwrap();
        let last = *real.vertices.last().unwrap();
        prop_assert!((last.norm() - 1.0).abs() < 1e-14);
        let sum: f64 = real.vertices.windows(2).map(|w| w[0].dist(w[1])).sum();
        prop_assert!((sum - real.total_length).abs() < 1e-13);
        let a = disk_path_length(DiskState { x, theta }, strat).unwrap();
        prop_assert!((a - real.total_length).abs() < 1e-10);
    }

    #[test]
    fn realization_monotone_in_caps(x in 0.0..=1.0f64, theta in -PI..=PI, c1 in 0.0..2.0f64, c2 in 0.0..2.0f64, turn in -PI..PI) {
        let (lo, hi) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
        let h = [Heading::new(theta), Heading::new(theta + turn)];
        let a = raycast(Region::Disk, Point::new(x, 0.0), &h, &[lo, f64::INFINITY]).unwrap();
        let b = raycast(Region::Disk, Point::new(x, 0.0), &h, &[hi, f64::INFINITY]).unwrap();
        // Both legs are inside a convex region, so a longer first leg can
        // only shorten the remaining trip by the same or less.
        prop_assert!(a.total_length.min(lo) <= b.total_length.min(hi) + 1e-12);
    }

    #[test]
    fn minimizer_stays_in_bounds(cx in -2.0..2.0f64, cy in -2.0..2.0f64, x0 in 0.0..1.0f64, y0 in 0.0..1.0f64) {
        let f = |p: &[f64]| (p[0] - cx).powi(2) + 3.0 * (p[1] - cy).powi(2);
        let b = Bounds::new(vec![0.0, 0.0], vec![1.0, 1.0]);
        let r = minimize(&f, &[x0, y0], &b, &MinimizeOptions::default());
        prop_assert!(b.contains(&r.params));
        prop_assert!((r.params[0] - cx.clamp(0.0, 1.0)).abs() < 1e-6);
        prop_assert!((r.params[1] - cy.clamp(0.0, 1.0)).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_below_arclength_and_increasing(k in -0.4..0.4f64, cap in 0.05..0.4f64) {
        let frame = trace_curve(&TurningCurve::constant_curvature(k, cap).unwrap()).unwrap();
        prop_assert!(frame.s_star >= 2.0);
        prop_assert!(frame.lambda_increasing(2000));
        for i in 1..=100 {
            let s = frame.s_star * i as f64 / 100.0;
            prop_assert!(frame.lambda(s) <= s + 1e-15);
        }
    }
}
