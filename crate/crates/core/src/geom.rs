//! Planar points and angle arithmetic shared by the analytic models and the
//! ray-casting oracle.
//!
//! Headings that are sums of several angles (a start heading plus pivots) are
//! carried with a low-order correction term, so that `cos(θ + α)` near a zero
//! crossing is accurate to a few ulps of the result rather than to a few ulps
//! of `π`. Without this, lengths `N / cos(θ + α)` near the singular set lose
//! relative accuracy proportional to `1 / |cos|`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{EscapeError, Result};

/// `π - PI` to double precision.
pub const PI_LO: f64 = 1.224_646_799_147_353_2e-16;

/// Slack allowed on inverse-trig arguments before they are treated as out of domain.
pub const TRIG_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Heading of the vector, in `(-π, π]`.
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// Error-free transformation `a + b = s + e`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// An absolute heading held as an unevaluated sum `hi + lo`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Heading {
    pub hi: f64,
    pub lo: f64,
}

impl Heading {
    pub fn new(angle: f64) -> Self {
        Self { hi: angle, lo: 0.0 }
    }

    /// Exact-as-possible sum of several angles.
    pub fn sum(terms: &[f64]) -> Self {
        terms.iter().fold(Self::default(), |h, &t| h.plus(t, 0.0))
    }

    fn plus(self, hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(self.hi, hi);
        let lo = e + self.lo + lo;
        let (hi, lo) = two_sum(s, lo);
        Self { hi, lo }
    }

    /// Heading after pivoting by `gamma`: `h + gamma - π`, i.e. a clockwise
    /// turn by `π - gamma`. `gamma = π` continues straight.
    pub fn pivot(self, gamma: f64) -> Self {
        self.plus(gamma, 0.0).plus(-PI, -PI_LO)
    }

    pub fn radians(self) -> f64 {
        self.hi + self.lo
    }

    pub fn cos(self) -> f64 {
        self.hi.cos() - self.hi.sin() * self.lo
    }

    pub fn sin(self) -> f64 {
        self.hi.sin() + self.hi.cos() * self.lo
    }

    pub fn direction(self) -> Point {
        Point::new(self.cos(), self.sin())
    }
}

/// `cos` of the exact sum of `terms`.
pub fn cos_sum(terms: &[f64]) -> f64 {
    Heading::sum(terms).cos()
}

fn clamp_unit(name: &'static str, v: f64) -> Result<f64> {
    if v.is_nan() || v.abs() > 1.0 + TRIG_CLAMP {
        return Err(EscapeError::Domain(format!(
            "{name} argument {v} outside [-1, 1]"
        )));
    }
    Ok(v.clamp(-1.0, 1.0))
}

/// `acos` with arguments within [`TRIG_CLAMP`] of `[-1, 1]` clamped.
pub fn acos_checked(name: &'static str, v: f64) -> Result<f64> {
    clamp_unit(name, v).map(f64::acos)
}

pub fn asin_checked(name: &'static str, v: f64) -> Result<f64> {
    clamp_unit(name, v).map(f64::asin)
}

pub fn deg(rad: f64) -> f64 {
    rad.to_degrees()
}

pub fn rad(deg: f64) -> f64 {
    deg.to_radians()
}
