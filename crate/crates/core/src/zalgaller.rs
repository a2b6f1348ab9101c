//! Zalgaller's heuristic escape path for the strip and its polygonal fits.
//!
//! Coordinates are relative to the swimmer's start, with the first leg along
//! the positive x-axis. The path turns left throughout; the strip strategies
//! turn right, which is the same path reflected, so fits only use turn sizes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{EscapeError, Result};
use crate::geom::{deg, rad, Point};
use crate::numerics::QuadratureSpec;
use crate::objectives::{strip2_expected, strip3_expected};
use crate::strip::{Strategy2, Strategy3};

pub const A: Point = Point { x: 0.0, y: 0.0 };
pub const B: Point = Point { x: 0.814, y: 0.0 };
pub const C: Point = Point { x: 0.8460, y: 0.0005 };
pub const D: Point = Point { x: 1.3017, y: 0.0151 };
pub const E: Point = Point { x: 0.814, y: 1.0 };
pub const ARC_ANGLE: f64 = 0.032;

/// Zalgaller's own estimate of his path's expected length.
pub const ZALGALLER_CLAIM: f64 = 0.9523;
/// Reference optima of the 2- and 3-segment strip strategies.
pub const STRIP2_OPTIMUM: f64 = 0.886_966_905_6;
pub const STRIP3_OPTIMUM: f64 = 0.883_553_478_8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZalgallerPath {
    pub vertices: [Point; 5],
    pub arc_center: Point,
    pub arc_radius: f64,
    pub arc_angle: f64,
    /// A, B, the arc interior, C, D, E.
    pub polyline: Vec<Point>,
}

/// The reference vertices with the arc from B to C sampled every ≤ 1e-3 rad.
pub fn build_zalgaller() -> ZalgallerPath {
    let steps = (ARC_ANGLE / 1e-3).ceil() as usize;
    let mut polyline = vec![A, B];
    for i in 1..steps {
        let t = ARC_ANGLE * i as f64 / steps as f64;
        polyline.push(E + Point::new(t.sin(), -t.cos()));
    }
    polyline.extend([C, D, E]);
    ZalgallerPath {
        vertices: [A, B, C, D, E],
        arc_center: E,
        arc_radius: 1.0,
        arc_angle: ARC_ANGLE,
        polyline,
    }
}

impl ZalgallerPath {
    /// Where the exact arc of the stated angle ends (the listed C is rounded).
    pub fn arc_end(&self) -> Point {
        self.arc_center + Point::new(self.arc_angle.sin(), -self.arc_angle.cos()) * self.arc_radius
    }

    pub fn length(&self) -> f64 {
        polyline_length(&self.polyline)
    }
}

pub fn polyline_length(pts: &[Point]) -> f64 {
    pts.windows(2).map(|w| w[0].dist(w[1])).sum()
}

fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let o = |a: Point, b: Point, c: Point| (b - a).cross(c - a);
    let (d1, d2) = (o(q1, q2, p1), o(q1, q2, p2));
    let (d3, d4) = (o(p1, p2, q1), o(p1, p2, q2));
    d1 * d2 <= 0.0 && d3 * d4 <= 0.0 && !(d1 == 0.0 && d2 == 0.0 && d3 == 0.0 && d4 == 0.0)
}

/// No two non-adjacent segments meet.
pub fn is_simple(pts: &[Point]) -> bool {
    let n = pts.len();
    for i in 0..n.saturating_sub(1) {
        for j in i + 2..n - 1 {
            if segments_cross(pts[i], pts[i + 1], pts[j], pts[j + 1]) {
                return false;
            }
        }
    }
    true
}

/// Signed turn from direction `u` to direction `v`, in `(-π, π]`.
fn turn(u: Point, v: Point) -> f64 {
    u.cross(v).atan2(u.dot(v))
}

/// Chord pair through the interior vertex farthest from the start:
/// `r = |start → P|`, `α = π − |turn at P|`. A polyline without interior
/// vertices is a straight path: `α = π`, `r` its length.
pub fn fit_two_segment(pts: &[Point]) -> Result<Strategy2> {
    if pts.len() < 2 {
        return Err(EscapeError::Domain("a path needs at least two points".into()));
    }
    let start = pts[0];
    let end = pts[pts.len() - 1];
    let interior = &pts[1..pts.len() - 1];
    let Some(&p) = interior
        .iter()
        .max_by(|a, b| a.dist(start).total_cmp(&b.dist(start)))
    else {
        return Strategy2::new(start.dist(end), PI);
    };
    let t = turn(p - start, end - p);
    Strategy2::new(p.dist(start), PI - t.abs())
}

fn point_segment_dist(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

fn max_deviation(pts: &[Point], fit: &[Point]) -> f64 {
    pts.iter()
        .map(|&p| {
            fit.windows(2)
                .map(|w| point_segment_dist(p, w[0], w[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Three-chord fit through the pair of interior vertices whose chord polygon
/// has the smallest maximum deviation from the path. Both turns must go the
/// same way, since the 3-segment strategy pivots the same way twice.
pub fn fit_three_segment(pts: &[Point]) -> Result<Strategy3> {
    let n = pts.len();
    if n < 4 {
        return Err(EscapeError::Domain("a 3-segment fit needs two interior vertices".into()));
    }
    let (start, end) = (pts[0], pts[n - 1]);
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 1..n - 1 {
        for j in i + 1..n - 1 {
            let dev = max_deviation(pts, &[start, pts[i], pts[j], end]);
            if best.is_none_or(|b| dev < b.0) {
                best = Some((dev, i, j));
            }
        }
    }
    let (_, i, j) = best.expect("n ≥ 4");
    let (p, q) = (pts[i], pts[j]);
    let t1 = turn(p - start, q - p);
    let t2 = turn(q - p, end - q);
    if t1 * t2 < 0.0 {
        return Err(EscapeError::Domain(format!("turns {t1} and {t2} have opposite signs")));
    }
    Strategy3::new(p.dist(start), PI - t1.abs(), q.dist(p), PI - t2.abs())
}

/// Polyline of a 2-segment strategy from the origin along +x, turning left
/// by `π − α`, with a second leg of length `tail`.
pub fn strategy2_polyline(strat: Strategy2, tail: f64) -> Vec<Point> {
    let p = Point::new(strat.r, 0.0);
    let h = PI - strat.alpha;
    vec![A, p, p + Point::new(h.cos(), h.sin()) * tail]
}

pub fn strategy3_polyline(strat: Strategy3, tail: f64) -> Vec<Point> {
    let p = Point::new(strat.r, 0.0);
    let h1 = PI - strat.alpha;
    let q = p + Point::new(h1.cos(), h1.sin()) * strat.s;
    let h2 = h1 + PI - strat.beta;
    vec![A, p, q, q + Point::new(h2.cos(), h2.sin()) * tail]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZalgallerReport {
    pub fit: Strategy2,
    pub alpha_deg: f64,
    /// Expected strip escape length of `fit`.
    pub expected: f64,
    /// The same at the rounded parameters `(1.3017, 64.3°)`.
    pub expected_rounded: f64,
    pub three_segment_fit: Option<Strategy3>,
    pub three_segment_expected: Option<f64>,
    pub strip3_optimum: f64,
    pub strip2_optimum: f64,
    pub zalgaller_claim: f64,
    /// `strip3 optimum < strip2 optimum < expected < claim`.
    pub ordering_holds: bool,
}

pub fn evaluate_zalgaller() -> Result<ZalgallerReport> {
    let path = build_zalgaller();
    let fit = fit_two_segment(&path.polyline)?;
    let expected = strip2_expected(fit)?.value;
    let expected_rounded = strip2_expected(Strategy2::new(1.3017, rad(64.3))?)?.value;
    let three = fit_three_segment(&path.polyline).ok();
    let three_expected = three.and_then(|s| strip3_expected(s, &QuadratureSpec::default()).ok().map(|v| v.value));
    Ok(ZalgallerReport {
        fit,
        alpha_deg: deg(fit.alpha),
        expected,
        expected_rounded,
        three_segment_fit: three,
        three_segment_expected: three_expected,
        strip3_optimum: STRIP3_OPTIMUM,
        strip2_optimum: STRIP2_OPTIMUM,
        zalgaller_claim: ZALGALLER_CLAIM,
        ordering_holds: STRIP3_OPTIMUM < STRIP2_OPTIMUM && STRIP2_OPTIMUM < expected && expected < ZALGALLER_CLAIM,
    })
}
