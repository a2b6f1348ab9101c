//! Ground-truth evaluation of piecewise-linear escape paths.
//!
//! A path is given by its start point, a heading per segment and a length
//! cap per segment (the last one unbounded). Segments are walked in order and
//! each one is cut at its first boundary intersection, found by solving the
//! linear (strip) or quadratic (disk) boundary equation directly. The analytic
//! case formulas in [`crate::strip`] and [`crate::disk`] are checked against
//! this.

use serde::{Deserialize, Serialize};

use crate::disk::DiskStrategy;
use crate::error::{EscapeError, Result};
use crate::geom::{Heading, Point};
use crate::strip::{Strategy2, Strategy3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// `{0 ≤ x ≤ 1}`
    Strip,
    /// The closed unit disk.
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExitSide {
    Left,
    Right,
    Circle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeRealization {
    pub vertices: Vec<Point>,
    pub total_length: f64,
    pub escaped: bool,
    pub exit_side: Option<ExitSide>,
    /// Index of the segment that reached the boundary.
    pub exit_segment: Option<usize>,
}

/// Strategies whose realizations the oracle can build.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PathStrategy {
    Strip2(Strategy2),
    Strip3(Strategy3),
    Disk2(DiskStrategy),
    /// Never pivot.
    Straight,
}

/// Headings and segment caps for a strategy started at heading `theta`.
///
/// Each pivot by `γ` maps the heading `h` to `h + γ - π`.
pub fn strategy_to_headings(theta: f64, strat: &PathStrategy) -> (Vec<Heading>, Vec<f64>) {
    let h0 = Heading::new(theta);
    match *strat {
        PathStrategy::Strip2(Strategy2 { r, alpha }) | PathStrategy::Disk2(DiskStrategy { r, alpha }) => {
            (vec![h0, h0.pivot(alpha)], vec![r, f64::INFINITY])
        }
        PathStrategy::Strip3(Strategy3 { r, alpha, s, beta }) => {
            let h1 = h0.pivot(alpha);
            (vec![h0, h1, h1.pivot(beta)], vec![r, s, f64::INFINITY])
        }
        PathStrategy::Straight => (vec![h0], vec![f64::INFINITY]),
    }
}

/// Distance along `dir` from `p` to the boundary, with the side reached.
fn boundary_hit(region: Region, p: Point, dir: Point) -> Option<(f64, ExitSide)> {
    match region {
        Region::Strip => {
            if dir.x > 0.0 {
                Some(((1.0 - p.x) / dir.x, ExitSide::Right))
            } else if dir.x < 0.0 {
                Some((-p.x / dir.x, ExitSide::Left))
            } else {
                None
            }
        }
        Region::Disk => {
            // |p + t d|² = 1 with |d| = 1: t² + 2bt + c = 0.
            let b = p.dot(dir);
            let c = p.dot(p) - 1.0;
            let disc = (b * b - c).max(0.0);
            let root = disc.sqrt();
            let t = if b <= 0.0 { root - b } else { -c / (b + root) };
            Some((t.max(0.0), ExitSide::Circle))
        }
    }
}

fn inside(region: Region, p: Point) -> bool {
    match region {
        Region::Strip => (0.0..=1.0).contains(&p.x) && p.y.is_finite(),
        Region::Disk => p.dot(p) <= 1.0 + 1e-12,
    }
}

/// Walk the path until it first meets the boundary.
pub fn raycast(region: Region, start: Point, headings: &[Heading], caps: &[f64]) -> Result<EscapeRealization> {
    if headings.is_empty() || headings.len() != caps.len() {
        return Err(EscapeError::Domain(format!(
            "{} headings for {} caps",
            headings.len(),
            caps.len()
        )));
    }
    if !inside(region, start) {
        return Err(EscapeError::Domain(format!("start {start:?} lies outside {region:?}")));
    }
    let mut p = start;
    let mut vertices = vec![start];
    let mut total = 0.0;
    for (k, (h, &cap)) in headings.iter().zip(caps).enumerate() {
        let dir = h.direction();
        match boundary_hit(region, p, dir) {
            Some((t, side)) if t <= cap => {
                if t > 0.0 {
                    p = p + dir * t;
                    vertices.push(p);
                    total += t;
                }
                return Ok(EscapeRealization {
                    vertices,
                    total_length: total,
                    escaped: true,
                    exit_side: Some(side),
                    exit_segment: Some(k),
                });
            }
            _ if cap.is_infinite() => return Err(EscapeError::NoEscape),
            _ => {
                if cap > 0.0 {
                    p = p + dir * cap;
                    vertices.push(p);
                    total += cap;
                }
            }
        }
    }
    Ok(EscapeRealization {
        vertices,
        total_length: total,
        escaped: false,
        exit_side: None,
        exit_segment: None,
    })
}

/// Raycast the realization of `strat` from `start` with initial heading `theta`.
pub fn realize(region: Region, start: Point, theta: f64, strat: &PathStrategy) -> Result<EscapeRealization> {
    let (headings, caps) = strategy_to_headings(theta, strat);
    raycast(region, start, &headings, &caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn straight_exits() {
        let r = raycast(Region::Strip, Point::new(0.5, 0.0), &[Heading::new(0.0)], &[f64::INFINITY]).unwrap();
        assert_eq!(r.total_length, 0.5);
        assert_eq!(r.exit_side, Some(ExitSide::Right));
        for theta in [0.0, 1.0, -2.5, PI] {
            let r = raycast(Region::Disk, Point::new(0.0, 0.0), &[Heading::new(theta)], &[f64::INFINITY]).unwrap();
            assert!((r.total_length - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn headings_follow_pivot_rule() {
        let (h, caps) = strategy_to_headings(0.4, &PathStrategy::Strip2(Strategy2 { r: 1.2, alpha: 1.1 }));
        assert!((h[1].radians() - (0.4 + 1.1 - PI)).abs() < 1e-15);
        assert_eq!(caps, vec![1.2, f64::INFINITY]);
        let strat = Strategy3 { r: 1.1, alpha: 1.4, s: 0.5, beta: 2.7 };
        let (h, caps) = strategy_to_headings(0.4, &PathStrategy::Strip3(strat));
        assert!((h[2].radians() - (0.4 + 1.4 + 2.7 - 2.0 * PI)).abs() < 1e-15);
        assert_eq!(caps.len(), 3);
        let (h, _) = strategy_to_headings(0.9, &PathStrategy::Disk2(DiskStrategy { r: 0.5, alpha: PI }));
        assert!((h[1].radians() - h[0].radians()).abs() < 1e-15);
    }

    #[test]
    fn vertical_final_leg_never_escapes_strip() {
        // The f64 nearest π/2 is not π/2, so that heading does escape, far away.
        let far = raycast(
            Region::Strip,
            Point::new(0.5, 0.0),
            &[Heading::new(std::f64::consts::FRAC_PI_2)],
            &[f64::INFINITY],
        )
        .unwrap();
        assert!(far.total_length > 1e15);
        let up = Heading { hi: 0.0, lo: 0.0 }.pivot(std::f64::consts::FRAC_PI_2).pivot(PI);
        let res = raycast(Region::Strip, Point::new(0.5, 0.0), &[Heading { hi: -up.hi, lo: -up.lo }], &[f64::INFINITY]);
        assert!(res == Err(EscapeError::NoEscape) || res.unwrap().total_length > 1e15);
    }

    #[test]
    fn finite_caps_without_escape() {
        let r = raycast(Region::Disk, Point::new(0.0, 0.0), &[Heading::new(0.0)], &[0.25]).unwrap();
        assert!(!r.escaped);
        assert_eq!(r.vertices.len(), 2);
        assert!(raycast(Region::Disk, Point::new(2.0, 0.0), &[Heading::new(0.0)], &[1.0]).is_err());
    }

    #[test]
    fn intersection_points_on_boundary() {
        let r = realize(
            Region::Disk,
            Point::new(0.3, 0.0),
            1.1,
            &PathStrategy::Disk2(DiskStrategy { r: 0.4, alpha: 0.7 }),
        )
        .unwrap();
        let last = *r.vertices.last().unwrap();
        assert!((last.norm() - 1.0).abs() < 1e-14);
        let sum: f64 = r.vertices.windows(2).map(|w| w[0].dist(w[1])).sum();
        assert!((sum - r.total_length).abs() < 1e-14);
    }
}
