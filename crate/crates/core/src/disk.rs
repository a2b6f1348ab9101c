//! The unit disk. The swimmer starts at `(x, 0)`, `0 ≤ x ≤ 1`, with heading
//! `θ ∈ [-π, π]`, travels `r`, pivots by `α` and continues to the circle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::case::CaseLabel;
use crate::error::{check_range, EscapeError, Result};
use crate::geom::{acos_checked, Point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskState {
    pub x: f64,
    pub theta: f64,
}

impl DiskState {
    pub fn new(x: f64, theta: f64) -> Result<Self> {
        check_range("x", x, 0.0, 1.0, "[0, 1]")?;
        check_range("theta", theta, -PI, PI, "[-π, π]")?;
        Ok(Self { x, theta })
    }

    pub fn start(&self) -> Point {
        Point::new(self.x, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskStrategy {
    pub r: f64,
    pub alpha: f64,
}

impl DiskStrategy {
    pub fn new(r: f64, alpha: f64) -> Result<Self> {
        check_range("r", r, 0.0, 2.0, "[0, 2]")?;
        check_range("alpha", alpha, 0.0, PI, "[0, π]")?;
        Ok(Self { r, alpha })
    }
}

/// Intermediate quantities of a Case 2' evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskGeometry {
    /// Half-angle of headings escaping within `r`, when defined.
    pub phi: Option<f64>,
    /// Branch threshold for `omega`, when `x ≥ r`.
    pub psi: Option<f64>,
    /// Distance of the pivot point from the centre.
    pub y: f64,
    pub omega: f64,
    /// Straight-line escape distance from the start.
    pub q: f64,
    /// Second leg length.
    pub s: f64,
}

/// `arccos((1 - x² - r²)/(2xr))`, defined iff `x ≥ |r - 1|`.
pub fn disk_phi(x: f64, r: f64) -> Result<f64> {
    if !(x > 0.0 && r > 0.0) {
        return Err(EscapeError::Domain(format!("φ needs x, r > 0 (x = {x}, r = {r})")));
    }
    if x < (r - 1.0).abs() {
        return Err(EscapeError::Domain(format!("φ needs x ≥ |r - 1| (x = {x}, r = {r})")));
    }
    acos_checked("φ", (1.0 - x * x - r * r) / (2.0 * x * r))
}

/// `arccos(-r/x)`, defined for `0 ≤ r ≤ x`, `x > 0`.
pub fn disk_psi(x: f64, r: f64) -> Result<f64> {
    if !(x > 0.0 && r >= 0.0 && r <= x) {
        return Err(EscapeError::Domain(format!("ψ needs 0 ≤ r ≤ x, x > 0 (x = {x}, r = {r})")));
    }
    acos_checked("ψ", -r / x)
}

/// Straight-line distance to the circle from `(x, 0)` along `θ`.
pub fn chord(x: f64, theta: f64) -> f64 {
    let sn = theta.sin();
    -x * theta.cos() + (1.0 - x * x * sn * sn).max(0.0).sqrt()
}

pub fn disk_classify(state: DiskState, strat: DiskStrategy) -> CaseLabel {
    let DiskState { x, theta } = state;
    let r = strat.r;
    if r == 0.0 {
        return CaseLabel::DiskCase2;
    }
    if x < r - 1.0 {
        return CaseLabel::DiskCase1;
    }
    if x >= (r - 1.0).abs() {
        // x = 0 forces r = 1: every chord from the centre has length exactly r.
        let phi = if x == 0.0 { PI } else { disk_phi(x, r).unwrap_or(0.0) };
        if -phi <= theta && theta <= phi {
            return CaseLabel::DiskCase1;
        }
    }
    CaseLabel::DiskCase2
}

/// Case 2' quantities: pivot point radius `y`, triangle angle `ω` and the
/// second leg `s`.
pub fn disk_geometry(state: DiskState, strat: DiskStrategy) -> Result<DiskGeometry> {
    let DiskState { x, theta } = state;
    let DiskStrategy { r, alpha } = strat;
    let phi = disk_phi(x, r).ok();
    let psi = if x > 0.0 && r <= x { Some(disk_psi(x, r)?) } else { None };
    let q = chord(x, theta);
    let y = (x * x + r * r + 2.0 * x * r * theta.cos()).max(0.0).sqrt();
    if y == 0.0 {
        // Pivot point at the centre; ω is undefined but every direction has s = 1.
        return Ok(DiskGeometry { phi, psi, y, omega: 0.0, q, s: 1.0 });
    }
    // arcsin(x sin θ / y), evaluated against the complementary side
    // |x cos θ + r| = y cos ω for accuracy near ω = ±π/2.
    let principal = (x * theta.sin()).atan2((x * theta.cos() + r).abs());
    let second_branch = match psi {
        Some(psi) if x >= r => theta < -psi || psi < theta,
        _ => false,
    };
    let omega = if second_branch { PI - principal } else { principal };
    let turn = alpha + omega;
    let sn = turn.sin();
    let disc = 1.0 - y * y * sn * sn;
    if disc < -1e-12 {
        return Err(EscapeError::Domain(format!("pivot point at radius {y} outside the disk")));
    }
    let s = y * turn.cos() + disc.max(0.0).sqrt();
    Ok(DiskGeometry { phi, psi, y, omega, q, s })
}

pub fn disk_path_length(state: DiskState, strat: DiskStrategy) -> Result<f64> {
    match disk_classify(state, strat) {
        CaseLabel::DiskCase1 => Ok(chord(state.x, state.theta)),
        _ => Ok(strat.r + disk_geometry(state, strat)?.s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rad;

    #[test]
    fn phi_examples() {
        assert!((disk_phi(1.0, 2.0).unwrap() - PI).abs() < 1e-15);
        for r in [0.3, 1.0, 1.7] {
            assert!((disk_phi(1.0, r).unwrap() - (-r / 2.0).acos()).abs() < 1e-15);
        }
        let phi = disk_phi(0.5, 0.6).unwrap();
        assert!((chord(0.5, phi) - 0.6).abs() < 1e-14);
        assert!((chord(0.5, -phi) - 0.6).abs() < 1e-14);
        assert!(disk_phi(0.2, 0.5).is_err());
    }

    #[test]
    fn psi_examples() {
        assert!((disk_psi(0.7, 0.7).unwrap() - PI).abs() < 1e-15);
        assert!((disk_psi(0.7, 0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((disk_psi(0.8, 0.4).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!(disk_psi(0.3, 0.4).is_err());
    }

    #[test]
    fn classification_examples() {
        let st = DiskState::new(0.37, 2.1).unwrap();
        assert_eq!(disk_classify(st, DiskStrategy::new(2.0, 0.3).unwrap()), CaseLabel::DiskCase1);
        assert_eq!(disk_classify(st, DiskStrategy::new(0.0, 0.3).unwrap()), CaseLabel::DiskCase2);
        // Forward distance from (0.5, 0) along θ = 0 is 0.5 > 0.4: the first
        // leg ends inside the disk. x = 0.5 < |r - 1| = 0.6 agrees.
        let st = DiskState::new(0.5, 0.0).unwrap();
        assert_eq!(disk_classify(st, DiskStrategy::new(0.4, 1.0).unwrap()), CaseLabel::DiskCase2);
        assert_eq!(disk_classify(st, DiskStrategy::new(0.6, 1.0).unwrap()), CaseLabel::DiskCase1);
    }

    #[test]
    fn centre_start_with_long_first_leg() {
        let strat = DiskStrategy::new(2.0, 0.4).unwrap();
        for theta in [-3.0, -0.2, 0.0, 1.5] {
            let l = disk_path_length(DiskState::new(0.0, theta).unwrap(), strat).unwrap();
            assert!((l - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn straight_continuation_matches_chord() {
        for &(x, theta, r) in &[(0.3, 2.0, 0.5), (0.9, -2.9, 0.2), (0.6, 3.0, 0.6), (0.1, 0.4, 1.2)] {
            let st = DiskState::new(x, theta).unwrap();
            let l = disk_path_length(st, DiskStrategy::new(r, PI).unwrap()).unwrap();
            assert!((l - chord(x, theta)).abs() < 1e-12, "{x} {theta} {r}");
        }
    }

    #[test]
    fn pivot_at_centre() {
        let st = DiskState::new(0.5, PI).unwrap();
        let l = disk_path_length(st, DiskStrategy::new(0.5, rad(40.0)).unwrap()).unwrap();
        assert!((l - 1.5).abs() < 1e-12);
    }
}
