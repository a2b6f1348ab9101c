use std::f64::consts::{FRAC_PI_2, PI};

use lost_at_sea::disk::DiskStrategy;
use lost_at_sea::geom::rad;
use lost_at_sea::montecarlo::{estimate_mean, Scenario};
use lost_at_sea::numerics::QuadratureSpec;
use lost_at_sea::objectives::{
    disk_expected, strip2_expected, strip2_expected_quad, strip2_objective, strip3_expected, strip3_objective, Method,
    DISK_STRAIGHT_MEAN,
};
use lost_at_sea::oracle::PathStrategy;
use lost_at_sea::paper_check::{strip2_twin_grid, STRIP2_PARAMS, STRIP3_PARAMS};
use lost_at_sea::strip::{Strategy2, Strategy3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn s3(p: [f64; 4]) -> Strategy3 {
    Strategy3 { r: p[0], alpha: p[1], s: p[2], beta: p[3] }
}

#[test]
fn strip2_reference_values() {
    let opt = strip2_expected(Strategy2 { r: STRIP2_PARAMS[0], alpha: STRIP2_PARAMS[1] }).unwrap();
    assert!((opt.value - 0.886_966_905_6).abs() < 1e-10);
    let z = strip2_expected(Strategy2 { r: 1.3017, alpha: rad(64.3) }).unwrap();
    assert!((z.value - 0.9188).abs() <= 5e-4, "{}", z.value);
}

#[test]
fn twin_at_one_point_and_random_points() {
    let spec = QuadratureSpec::with_abs_tol(1e-12);
    let check = |s: Strategy2| {
        let a = strip2_expected(s).unwrap().value;
        let q = strip2_expected_quad(s, &spec).unwrap();
        assert_eq!(q.method, Method::Quadrature);
        assert!((a - q.value).abs() <= 1e-8, "{s:?}: {a} vs {}", q.value);
    };
    check(Strategy2 { r: 1.5, alpha: 1.2 });
    check(Strategy2 { r: STRIP2_PARAMS[0], alpha: STRIP2_PARAMS[1] });
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let r = rng.random_range(1.01..3.0f64);
        let alpha = FRAC_PI_2 - rng.random_range(0.01..0.99) * (1.0 / r).acos();
        check(Strategy2 { r, alpha });
    }
}

#[test]
fn twin_on_hundred_point_grid() {
    let spec = QuadratureSpec::with_abs_tol(1e-12);
    let grid = strip2_twin_grid();
    assert_eq!(grid.len(), 100);
    for s in grid {
        let d = (strip2_expected(s).unwrap().value - strip2_expected_quad(s, &spec).unwrap().value).abs();
        assert!(d <= 1e-8, "{s:?}: {d:e}");
    }
}

#[test]
fn strip3_reference_optimum_and_collapse() {
    let spec = QuadratureSpec::default();
    let v = strip3_expected(s3(STRIP3_PARAMS), &spec).unwrap().value;
    assert!((v - 0.883_553_478_8).abs() < 1e-9, "{v}");
    for (r, a) in [(1.1, 1.3), (1.5, 1.2), (STRIP2_PARAMS[0], STRIP2_PARAMS[1])] {
        for s in [0.0, 0.3, 1.0] {
            let three = strip3_expected(Strategy3 { r, alpha: a, s, beta: PI }, &spec).unwrap().value;
            let two = strip2_expected(Strategy2 { r, alpha: a }).unwrap().value;
            assert!((three - two).abs() <= 1e-8, "({r}, {a}, {s}): {three} vs {two}");
        }
    }
}

#[test]
fn disk_straight_and_reach_two() {
    let spec = QuadratureSpec::default();
    for r in [0.0, 0.5, 1.0, 1.5, 2.0] {
        let v = disk_expected(DiskStrategy { r, alpha: PI }, &spec).unwrap().value;
        assert!((v - DISK_STRAIGHT_MEAN).abs() < 1e-6, "r = {r}: {v}");
    }
    for a in [0.0, 0.7, 2.0] {
        let v = disk_expected(DiskStrategy { r: 2.0, alpha: a }, &spec).unwrap().value;
        assert!((v - DISK_STRAIGHT_MEAN).abs() < 1e-6, "α = {a}: {v}");
    }
}

#[test]
fn disk_lower_bound_with_equality_only_when_straight() {
    let spec = QuadratureSpec::with_abs_tol(1e-9);
    for r in [0.1, 0.5, 1.0, 1.5, 1.9] {
        for a in [0.0, 0.5, 1.0, 2.0, 3.0] {
            let v = disk_expected(DiskStrategy { r, alpha: a }, &spec).unwrap().value;
            assert!(v > DISK_STRAIGHT_MEAN + 1e-6, "({r}, {a}): {v}");
        }
    }
}

#[test]
fn disk_off_straight_point_matches_simulation() {
    let d = DiskStrategy { r: 0.5, alpha: FRAC_PI_2 };
    let v = disk_expected(d, &QuadratureSpec::default()).unwrap().value;
    assert!(v > DISK_STRAIGHT_MEAN);
    let mc = estimate_mean(Scenario::Disk, &PathStrategy::Disk2(d), 2_000_000, 4).unwrap();
    assert!((mc.point - v).abs() < 4.0 * mc.std_error, "{v} vs {mc:?}");
}

#[test]
fn strip2_mc_consistency() {
    let s = Strategy2 { r: STRIP2_PARAMS[0], alpha: STRIP2_PARAMS[1] };
    let mc = estimate_mean(Scenario::Strip, &PathStrategy::Strip2(s), 2_000_000, 8).unwrap();
    assert!((mc.point - 0.886_966_905_6).abs() < 4.0 * mc.std_error, "{mc:?}");
}

#[test]
fn optima_beat_random_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f2 = strip2_objective(&STRIP2_PARAMS);
    let spec = QuadratureSpec::default();
    let obj3 = strip3_objective(&spec);
    let f3 = obj3(&STRIP3_PARAMS);
    let unit = |rng: &mut ChaCha8Rng, n: usize| -> Vec<f64> {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| 0.05 * x / norm).collect()
    };
    for _ in 0..1000 {
        let d = unit(&mut rng, 2);
        let p = [STRIP2_PARAMS[0] + d[0], STRIP2_PARAMS[1] + d[1]];
        assert!(strip2_objective(&p) > f2, "{p:?}");
        let d = unit(&mut rng, 4);
        let p: Vec<f64> = STRIP3_PARAMS.iter().zip(&d).map(|(a, b)| a + b).collect();
        assert!(obj3(&p) > f3, "{p:?}");
    }
}

#[test]
fn domain_errors() {
    assert!(strip2_expected(Strategy2 { r: 1.0, alpha: 1.4 }).is_err());
    assert!(strip2_expected(Strategy2 { r: 1.5, alpha: FRAC_PI_2 }).is_err());
    assert!(strip2_expected(Strategy2 { r: 1.5, alpha: 0.2 }).is_err());
    assert!(strip3_expected(Strategy3 { r: 0.9, alpha: 1.4, s: 0.5, beta: 2.7 }, &QuadratureSpec::default()).is_err());
}
