//! Optimization drivers for the three strategy families.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::disk::DiskStrategy;
use crate::error::Result;
use crate::numerics::{minimize, multistart, Bounds, MinimizeOptions, OptimizationResult, QuadratureSpec};
use crate::objectives::{disk_expected, strip2_objective, strip3_objective};

pub const STRIP2_START: [f64; 2] = [1.2, 1.2];

pub fn strip2_bounds() -> Bounds {
    Bounds::new(vec![1.0, 0.0], vec![3.0, FRAC_PI_2])
}

/// Box searched for 3-segment optima: `(r, α, s, β)`.
pub fn strip3_bounds() -> Bounds {
    Bounds::new(vec![1.0, 1.0, 0.0, FRAC_PI_2], vec![1.6, FRAC_PI_2, 1.2, PI])
}

/// Local minimization of the 2-segment strip objective.
pub fn optimize_strip2(x0: [f64; 2], opts: &MinimizeOptions) -> OptimizationResult {
    minimize(&strip2_objective, &x0, &strip2_bounds(), opts)
}

pub fn strip3_options() -> MinimizeOptions {
    MinimizeOptions {
        tol: 1e-7,
        max_evals: 6_000,
        ..MinimizeOptions::default()
    }
}

/// Seeded multistart over [`strip3_bounds`].
pub fn optimize_strip3(n_starts: usize, seed: u64, opts: &MinimizeOptions, spec: &QuadratureSpec) -> OptimizationResult {
    let f = strip3_objective(spec);
    multistart(&f, &strip3_bounds(), n_starts, seed, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub r: f64,
    pub alpha: f64,
    pub value: f64,
}

/// Disk objective on the product grid `rs × alphas`, row-major in `r`.
pub fn disk_grid(rs: &[f64], alphas: &[f64], spec: &QuadratureSpec) -> Result<Vec<GridPoint>> {
    use rayon::prelude::*;
    let cells: Vec<(f64, f64)> = rs.iter().flat_map(|&r| alphas.iter().map(move |&a| (r, a))).collect();
    cells
        .par_iter()
        .map(|&(r, alpha)| {
            let value = disk_expected(DiskStrategy::new(r, alpha)?, spec)?.value;
            Ok(GridPoint { r, alpha, value })
        })
        .collect()
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Lowest grid value; ties go to the earlier cell.
pub fn grid_minimum(grid: &[GridPoint]) -> Option<GridPoint> {
    grid.iter().copied().reduce(|best, g| if g.value < best.value { g } else { best })
}
