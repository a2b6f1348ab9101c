//! Box-constrained Nelder–Mead with deterministic multistart.
//!
//! The search runs in unconstrained coordinates mapped onto the box, so every
//! evaluated point (and hence every returned minimizer) lies inside the
//! bounds. Objectives signal infeasibility by returning [`PENALTY`] or more.

use std::cell::Cell;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Value returned by objectives outside their validity region.
pub const PENALTY: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "bound dimensions differ");
        assert!(lower.iter().zip(&upper).all(|(l, u)| l <= u), "empty box");
        Self { lower, upper }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn project(&self, x: &mut [f64]) {
        for ((v, &l), &u) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(l, u);
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.lower)
            .zip(&self.upper)
            .all(|((v, l), u)| v >= l && v <= u)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    /// Stop when every vertex lies within this distance of the best one,
    /// measured in the unconstrained coordinates.
    pub tol: f64,
    pub max_evals: usize,
    /// Initial simplex edge as a fraction of the full sweep across the box.
    pub initial_step: f64,
    /// Fresh simplices built around the converged point, each ten times
    /// smaller than the last.
    pub restarts: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_evals: 20_000,
            initial_step: 0.05,
            restarts: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub params: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Which multistart run produced this result (0 for a single run).
    pub start_index: usize,
}

struct Simplex {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl Simplex {
    fn sort(&mut self) {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        self.points = idx.iter().map(|&i| self.points[i].clone()).collect();
        self.values = idx.iter().map(|&i| self.values[i]).collect();
    }

    fn diameter(&self) -> f64 {
        let best = &self.points[0];
        self.points[1..]
            .iter()
            .map(|p| p.iter().zip(best).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }
}

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Box coordinates from unconstrained ones: `x = l + (u - l)(1 + sin z)/2`.
/// Optima on a face sit at `sin z = ±1`, where the map is flat, so the
/// simplex never has to straddle the boundary.
struct BoxMap<'a>(&'a Bounds);

impl BoxMap<'_> {
    fn to_box(&self, z: &[f64]) -> Vec<f64> {
        z.iter()
            .zip(self.0.lower.iter().zip(&self.0.upper))
            .map(|(&z, (&l, &u))| (l + (u - l) * 0.5 * (1.0 + z.sin())).clamp(l, u))
            .collect()
    }

    fn from_box(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.0.lower.iter().zip(&self.0.upper))
            .map(|(&x, (&l, &u))| if u > l { (2.0 * (x - l) / (u - l) - 1.0).clamp(-1.0, 1.0).asin() } else { 0.0 })
            .collect()
    }
}

/// One Nelder–Mead descent in unconstrained coordinates; returns
/// (point, value, evaluations, converged).
fn descend<G>(g: &G, z0: &[f64], step: f64, tol: f64, budget: usize) -> (Vec<f64>, f64, usize, bool)
where
    G: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = z0.len();
    let evals = Cell::new(0usize);
    let eval = |z: &[f64]| {
        evals.set(evals.get() + 1);
        let v = g(z);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut points = vec![z0.to_vec()];
    let mut values = vec![eval(z0)];
    for i in 0..n {
        let mut p = z0.to_vec();
        p[i] += step;
        values.push(eval(&p));
        points.push(p);
    }
    let mut sx = Simplex { points, values };
    sx.sort();

    while sx.diameter() >= tol {
        if evals.get() >= budget {
            return (sx.points[0].clone(), sx.values[0], evals.get(), false);
        }
        let worst = sx.points[n].clone();
        let fw = sx.values[n];
        let centroid: Vec<f64> = (0..n)
            .map(|j| sx.points[..n].iter().map(|p| p[j]).sum::<f64>() / n as f64)
            .collect();

        let xr = affine(&centroid, &worst, -1.0);
        let fr = eval(&xr);
        if fr < sx.values[0] {
            let xe = affine(&centroid, &worst, -2.0);
            let fe = eval(&xe);
            if fe < fr {
                sx.points[n] = xe;
                sx.values[n] = fe;
            } else {
                sx.points[n] = xr;
                sx.values[n] = fr;
            }
        } else if fr < sx.values[n - 1] {
            sx.points[n] = xr;
            sx.values[n] = fr;
        } else {
            let xc = affine(&centroid, &worst, if fr < fw { -0.5 } else { 0.5 });
            let fc = eval(&xc);
            if fc < fw.min(fr) {
                sx.points[n] = xc;
                sx.values[n] = fc;
            } else {
                let best = sx.points[0].clone();
                for i in 1..=n {
                    let p = affine(&best, &sx.points[i], 0.5);
                    sx.values[i] = eval(&p);
                    sx.points[i] = p;
                }
            }
        }
        sx.sort();
    }
    (sx.points[0].clone(), sx.values[0], evals.get(), true)
}

/// Local minimization from `x0` (clamped into `bounds`). Every evaluated
/// point lies in the box.
pub fn minimize<F>(f: &F, x0: &[f64], bounds: &Bounds, opts: &MinimizeOptions) -> OptimizationResult
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    assert_eq!(x0.len(), bounds.dim(), "start point dimension");
    let map = BoxMap(bounds);
    let g = |z: &[f64]| f(&map.to_box(z));
    // A full sweep of z covers the box in π, so steps are fractions of π.
    let mut step = opts.initial_step * PI;
    let (mut z, mut v, mut evals, mut converged) = descend(&g, &map.from_box(x0), step, opts.tol, opts.max_evals);
    for _ in 0..opts.restarts {
        if !converged || evals >= opts.max_evals {
            break;
        }
        step *= 0.1;
        let (z2, v2, e2, c2) = descend(&g, &z, step.max(10.0 * opts.tol), opts.tol, opts.max_evals - evals);
        evals += e2;
        converged = c2;
        if v2 < v {
            z = z2;
            v = v2;
        }
    }
    OptimizationResult {
        params: map.to_box(&z),
        value: v,
        evaluations: evals,
        converged,
        start_index: 0,
    }
}

/// The seeded start points used by [`multistart`]: uniform in the box,
/// resampling draws where the objective is infeasible.
pub fn multistart_points<F>(f: &F, bounds: &Bounds, n_starts: usize, seed: u64) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> Vec<f64> {
        bounds
            .lower
            .iter()
            .zip(&bounds.upper)
            .map(|(&l, &u)| if l == u { l } else { rng.random_range(l..u) })
            .collect()
    };
    (0..n_starts)
        .map(|_| {
            let mut x = draw();
            for _ in 0..10_000 {
                let v = f(&x);
                if v.is_finite() && v < PENALTY {
                    break;
                }
                x = draw();
            }
            x
        })
        .collect()
}

/// Best of `n_starts` seeded local runs; ties go to the lowest start index.
pub fn multistart<F>(f: &F, bounds: &Bounds, n_starts: usize, seed: u64, opts: &MinimizeOptions) -> OptimizationResult
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    assert!(n_starts >= 1, "multistart needs at least one start");
    let starts = multistart_points(f, bounds, n_starts, seed);
    let runs: Vec<OptimizationResult> = starts
        .par_iter()
        .enumerate()
        .map(|(i, x0)| OptimizationResult {
            start_index: i,
            ..minimize(f, x0, bounds, opts)
        })
        .collect();
    let total: usize = runs.iter().map(|r| r.evaluations).sum();
    let mut best = runs
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value).then(a.start_index.cmp(&b.start_index)))
        .expect("n_starts ≥ 1");
    best.evaluations = total;
    best
}

/// Central-difference gradient.
pub fn finite_diff_gradient<F>(f: &F, x: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let mut p = x.to_vec();
    (0..x.len())
        .map(|i| {
            p[i] = x[i] + h;
            let up = f(&p);
            p[i] = x[i] - h;
            let down = f(&p);
            p[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}
