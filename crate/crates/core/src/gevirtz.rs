//! Flat escape curves in the disk and the functional `A(γ)`.
//!
//! A curve is given by its heading `φ(s)` as a function of arclength,
//! linearly interpolated between knots and held constant after the last one.
//! Because `φ` is linear on each piece, `γ(s) = ∫ exp(iφ)` is integrated in
//! closed form there, so tracing is exact up to rounding.
//!
//! `A(γ)` is the mean, over starts `z` uniform in the unit disk, of the
//! arclength `σ(z, γ)` at which the translated curve `z + γ` first leaves the
//! disk. When the circles `C(γ(s))` cut the disk in pairwise disjoint arcs it
//! reduces to a one-dimensional integral up to `s*`, where `|γ(s*)| = 2`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{EscapeError, Result};
use crate::montecarlo::{sample_chunks, summarize_mean, McEstimate};
use crate::numerics::{integrate, QuadratureSpec};
use crate::objectives::DISK_STRAIGHT_MEAN;

/// Probe pairs used when a caller does not choose.
pub const DEFAULT_PROBES: usize = 100_000;

/// Arclength searched for `s*` before giving up.
pub const DEFAULT_BUDGET: f64 = 1_000.0;

const MARCH_STEP: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurningCurve {
    /// `(s, φ)` pairs, strictly increasing in `s`, starting at `(0, 0)`.
    knots: Vec<(f64, f64)>,
    phi_max: f64,
}

impl TurningCurve {
    pub fn from_knots(knots: Vec<(f64, f64)>, phi_max: f64) -> Result<Self> {
        if !(phi_max >= 0.0 && phi_max < FRAC_PI_2) {
            return Err(EscapeError::Curve(format!("phi_max = {phi_max} must lie in [0, π/2)")));
        }
        match knots.first() {
            Some(&(s, p)) if s == 0.0 && p == 0.0 => {}
            _ => return Err(EscapeError::Curve("first knot must be (0, 0)".into())),
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(EscapeError::Curve(format!("arclength not increasing at s = {}", w[1].0)));
            }
        }
        for &(s, p) in &knots {
            if !(s.is_finite() && p.is_finite()) {
                return Err(EscapeError::Curve(format!("non-finite knot ({s}, {p})")));
            }
            if p.abs() > phi_max {
                return Err(EscapeError::Curve(format!("|phi({s})| = {} exceeds phi_max = {phi_max}", p.abs())));
            }
        }
        Ok(Self { knots, phi_max })
    }

    /// `φ ≡ 0`.
    pub fn straight() -> Self {
        Self {
            knots: vec![(0.0, 0.0)],
            phi_max: 0.0,
        }
    }

    /// `φ(s) = k s` until `|φ|` reaches `phi_max`, constant afterwards.
    pub fn constant_curvature(k: f64, phi_max: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(EscapeError::Curve(format!("curvature {k} is not finite")));
        }
        if k == 0.0 {
            return Self::from_knots(vec![(0.0, 0.0)], phi_max);
        }
        Self::from_knots(vec![(0.0, 0.0), (phi_max / k.abs(), phi_max.copysign(k))], phi_max)
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn phi_max(&self) -> f64 {
        self.phi_max
    }

    fn piece(&self, s: f64) -> usize {
        self.knots.partition_point(|k| k.0 <= s).saturating_sub(1)
    }

    fn slope(&self, i: usize) -> f64 {
        match self.knots.get(i + 1) {
            Some(&(s1, p1)) => (p1 - self.knots[i].1) / (s1 - self.knots[i].0),
            None => 0.0,
        }
    }

    pub fn phi(&self, s: f64) -> f64 {
        let i = self.piece(s);
        self.knots[i].1 + self.slope(i) * (s - self.knots[i].0)
    }
}

/// Plain-text curve files: one `s phi` pair per line (radians), `#` starts a
/// comment, and an optional `phi_max <value>` line sets the bound (default:
/// the largest `|phi|` among the knots).
impl FromStr for TurningCurve {
    type Err = EscapeError;

    fn from_str(text: &str) -> Result<Self> {
        let mut knots = Vec::new();
        let mut phi_max = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|f| !f.is_empty()).collect();
            let bad = || EscapeError::Curve(format!("line {}: cannot parse {raw:?}", lineno + 1));
            match fields.as_slice() {
                ["phi_max", v] => phi_max = Some(v.parse::<f64>().map_err(|_| bad())?),
                [s, p] => knots.push((s.parse::<f64>().map_err(|_| bad())?, p.parse::<f64>().map_err(|_| bad())?)),
                _ => return Err(bad()),
            }
        }
        let bound = phi_max.unwrap_or_else(|| knots.iter().map(|k: &(f64, f64)| k.1.abs()).fold(0.0, f64::max));
        Self::from_knots(knots, bound)
    }
}

impl fmt::Display for TurningCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "phi_max {}", self.phi_max)?;
        for (s, p) in &self.knots {
            writeln!(f, "{s} {p}")?;
        }
        Ok(())
    }
}

/// `∫₀ᵗ exp(iku) du`.
fn unit_arc(k: f64, t: f64) -> Complex64 {
    let half = 0.5 * k * t;
    let sinc = if half.abs() < 1e-8 { 1.0 - half * half / 6.0 } else { half.sin() / half };
    Complex64::from_polar(t * sinc, half)
}

/// A traced curve: `γ` at every knot plus `s*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFrame {
    pub curve: TurningCurve,
    knot_gamma: Vec<(f64, f64)>,
    pub s_star: f64,
}

impl CurveFrame {
    fn from_curve(curve: TurningCurve) -> Self {
        let mut knot_gamma = vec![(0.0, 0.0)];
        let mut g = Complex64::new(0.0, 0.0);
        for i in 0..curve.knots.len() - 1 {
            let (s0, p0) = curve.knots[i];
            let t = curve.knots[i + 1].0 - s0;
            g += Complex64::from_polar(1.0, p0) * unit_arc(curve.slope(i), t);
            knot_gamma.push((g.re, g.im));
        }
        Self {
            curve,
            knot_gamma,
            s_star: f64::NAN,
        }
    }

    pub fn gamma(&self, s: f64) -> Complex64 {
        let i = self.curve.piece(s);
        let (s0, p0) = self.curve.knots[i];
        let (gx, gy) = self.knot_gamma[i];
        Complex64::new(gx, gy) + Complex64::from_polar(1.0, p0) * unit_arc(self.curve.slope(i), s - s0)
    }

    pub fn lambda(&self, s: f64) -> f64 {
        self.gamma(s).norm()
    }

    pub fn arg_gamma(&self, s: f64) -> f64 {
        self.gamma(s).arg()
    }

    /// `λ(s_{i+1}) > λ(s_i)` on a uniform grid of `samples` points over `[0, s*]`.
    pub fn lambda_increasing(&self, samples: usize) -> bool {
        let n = samples.max(2);
        let mut prev = 0.0;
        (1..=n).all(|i| {
            let l = self.lambda(self.s_star * i as f64 / n as f64);
            let ok = l > prev;
            prev = l;
            ok
        })
    }
}

/// Tabulate `γ` and locate `s*` with the default arclength budget.
pub fn trace_curve(curve: &TurningCurve) -> Result<CurveFrame> {
    trace_curve_with_budget(curve, DEFAULT_BUDGET)
}

pub fn trace_curve_with_budget(curve: &TurningCurve, budget: f64) -> Result<CurveFrame> {
    let mut frame = CurveFrame::from_curve(curve.clone());
    // λ(s) ≤ s, so nothing before s = 2 can qualify.
    let mut lo = 0.0;
    let mut hi = 2.0;
    loop {
        if hi > budget {
            return Err(EscapeError::SStarNotFound { budget });
        }
        if frame.lambda(hi) >= 2.0 {
            break;
        }
        lo = hi;
        hi += MARCH_STEP;
    }
    if lo > 0.0 || frame.lambda(hi) > 2.0 {
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if frame.lambda(mid) < 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    frame.s_star = hi;
    Ok(frame)
}

/// Intersection points of the unit circles centred at `a` and `b`.
fn circle_pair(a: Complex64, b: Complex64) -> Option<[Complex64; 2]> {
    let d = b - a;
    let dist = d.norm();
    if dist == 0.0 || dist > 2.0 {
        return None;
    }
    let h = (1.0 - 0.25 * dist * dist).max(0.0).sqrt();
    let mid = 0.5 * (a + b);
    let perp = Complex64::new(-d.im, d.re) / dist * h;
    Some([mid + perp, mid - perp])
}

/// Whether the arcs `D ∩ C(γ(s))`, `0 ≤ s ≤ s*`, look pairwise disjoint.
///
/// Probes every pair from a uniform grid of `m` arclengths with
/// `m(m-1)/2 ≥ n_probe`. This is a sampling check, not a proof.
pub fn arcs_disjoint(frame: &CurveFrame, n_probe: usize) -> bool {
    let m = (((1.0 + (1.0 + 8.0 * n_probe as f64).sqrt()) / 2.0).ceil() as usize).max(2);
    let pts: Vec<Complex64> = (0..m)
        .map(|i| frame.gamma(frame.s_star * i as f64 / (m - 1) as f64))
        .collect();
    for i in 0..m {
        for j in i + 1..m {
            if let Some(xs) = circle_pair(pts[i], pts[j]) {
                if xs.iter().any(|p| p.norm() < 1.0 - 1e-12) {
                    return false;
                }
            }
        }
    }
    true
}

/// `A(γ)` by the one-dimensional arc formula; refuses when the arcs are not
/// disjoint, since the formula then no longer equals the area mean.
pub fn a_gamma_arc(frame: &CurveFrame, spec: &QuadratureSpec) -> Result<f64> {
    if !arcs_disjoint(frame, DEFAULT_PROBES) {
        return Err(EscapeError::ArcsIntersect);
    }
    a_gamma_arc_unchecked(frame, spec)
}

pub fn a_gamma_arc_unchecked(frame: &CurveFrame, spec: &QuadratureSpec) -> Result<f64> {
    let splits = frame.curve.knots.iter().map(|k| k.0).filter(|&s| s > 0.0 && s < frame.s_star);
    let spec = spec.clone().with_splits(splits);
    let integral = integrate(
        |s| {
            let g = frame.gamma(s);
            let lam = g.norm();
            let damp = (1.0 - 0.25 * lam * lam).max(0.0).sqrt();
            s * damp * (frame.curve.phi(s) - g.arg()).cos()
        },
        0.0,
        frame.s_star,
        &spec,
    )?;
    Ok(2.0 / PI * integral.value)
}

/// First `s` with `|z - γ(s)| = 1`, for `|z| ≤ 1`. Never exceeds `s*`.
pub fn sigma(frame: &CurveFrame, z: Complex64) -> Result<f64> {
    let gap = |s: f64| (frame.gamma(s) - z).norm() - 1.0;
    let mut lo = 0.0;
    let mut d = gap(lo);
    if d >= 0.0 {
        return Ok(0.0);
    }
    // |γ'| = 1, so the gap cannot close faster than the arclength grows.
    loop {
        let hi = (lo + (-d).max(1e-3)).min(frame.s_star);
        let dh = gap(hi);
        if dh >= 0.0 {
            let (mut a, mut b) = (lo, hi);
            while b - a > 1e-13 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if gap(mid) < 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return Ok(0.5 * (a + b));
        }
        if hi >= frame.s_star {
            return Err(EscapeError::NoEscape);
        }
        lo = hi;
        d = dh;
    }
}

/// `A(γ)` as the area mean of `σ(z, γ)` over the unit disk.
pub fn a_gamma_mc(frame: &CurveFrame, n: usize, seed: u64) -> Result<McEstimate> {
    let (values, failures) = sample_chunks(n, seed, |rng| {
        let rad: f64 = rng.random::<f64>().sqrt();
        let ang = rng.random_range(-PI..PI);
        sigma(frame, Complex64::from_polar(rad, ang))
    });
    summarize_mean(values, seed, failures)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub s_star: f64,
    pub a_gamma: f64,
    pub bound: f64,
    /// `a_gamma - 8/(3π)`.
    pub slack: f64,
    pub holds: bool,
}

/// Evaluate `A(γ)` and compare it with `8/(3π)`.
pub fn check_lower_bound(curve: &TurningCurve) -> Result<LowerBoundReport> {
    let frame = trace_curve(curve)?;
    let a = a_gamma_arc(&frame, &QuadratureSpec::with_abs_tol(1e-12))?;
    Ok(LowerBoundReport {
        s_star: frame.s_star,
        a_gamma: a,
        bound: DISK_STRAIGHT_MEAN,
        slack: a - DISK_STRAIGHT_MEAN,
        holds: a >= DISK_STRAIGHT_MEAN - 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_ray() {
        let f = trace_curve(&TurningCurve::straight()).unwrap();
        assert_eq!(f.s_star, 2.0);
        assert!((f.gamma(1.3) - Complex64::new(1.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn circular_arc_chord() {
        let k = 0.05;
        let f = trace_curve(&TurningCurve::constant_curvature(k, 1.0).unwrap()).unwrap();
        for s in [0.3, 1.0, 1.9] {
            assert!((f.lambda(s) - 2.0 / k * (k * s / 2.0).sin()).abs() < 1e-14);
        }
        assert!((2.0 / k * (k * f.s_star / 2.0).sin() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_continuous_at_knots() {
        let c = TurningCurve::from_knots(vec![(0.0, 0.0), (0.5, 0.2), (1.0, -0.1)], 0.3).unwrap();
        let f = trace_curve(&c).unwrap();
        for s in [0.5, 1.0] {
            assert!((f.gamma(s - 1e-12) - f.gamma(s)).norm() < 1e-11);
        }
    }

    #[test]
    fn parse_round_trip() {
        let c: TurningCurve = "# test\nphi_max 0.4\n0 0\n1.0 0.3\n".parse().unwrap();
        assert_eq!(c.knots(), &[(0.0, 0.0), (1.0, 0.3)]);
        let again: TurningCurve = c.to_string().parse().unwrap();
        assert_eq!(again, c);
        assert!("1 0\n".parse::<TurningCurve>().is_err());
        assert!("0 0\n1 2.0\n".parse::<TurningCurve>().is_err());
        assert!("0 0\nfoo\n".parse::<TurningCurve>().is_err());
    }

    #[test]
    fn sigma_straight_closed_form() {
        let f = trace_curve(&TurningCurve::straight()).unwrap();
        for z in [Complex64::new(0.3, -0.4), Complex64::new(-0.9, 0.1), Complex64::new(0.0, 0.0)] {
            let want = z.re + (1.0 - z.im * z.im).sqrt();
            assert!((sigma(&f, z).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_exhaustion() {
        let c = TurningCurve::from_knots(vec![(0.0, 0.0), (0.1, 1.5)], 1.5).unwrap();
        // Heading settles at 1.5 rad: still escapes, just slowly turning.
        assert!(trace_curve(&c).is_ok());
        assert!(matches!(
            trace_curve_with_budget(&TurningCurve::straight(), 1.0),
            Err(EscapeError::SStarNotFound { .. })
        ));
    }
}
