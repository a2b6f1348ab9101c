//! The unit-width strip `{0 ≤ x ≤ 1}`.
//!
//! A swimmer starts at `(x, 0)` with heading `θ`. After the reflection
//! `(x, θ) ↦ (1 - x, θ + π)` every state has `θ ∈ [0, π]`, and the five-case
//! partition below is exhaustive for two-segment strategies. Three-segment
//! strategies refine Case 3 into `Sub31` (right shore during the second leg)
//! and `Sub32` (right shore during the third leg).
//!
//! Pivots follow [`Heading::pivot`]: pivoting by `γ` maps heading `h` to
//! `h + γ - π`, so `γ = π` continues straight and `γ = 0` reverses.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::case::CaseLabel;
use crate::error::{check_range, EscapeError, Result};
use crate::geom::{acos_checked, cos_sum, Point};
use crate::oracle::{self, ExitSide, PathStrategy, Region};

/// Path-length denominators `|cos(·)|` below this are refused as singular.
pub const SINGULAR_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripState {
    /// Distance from the left shore.
    pub x: f64,
    /// Heading from the +x axis, in `[0, π]`.
    pub theta: f64,
}

impl StripState {
    /// A state that is already normalized.
    pub fn new(x: f64, theta: f64) -> Result<Self> {
        check_range("x", x, 0.0, 1.0, "[0, 1]")?;
        check_range("theta", theta, 0.0, PI, "[0, π]")?;
        Ok(Self { x, theta })
    }

    pub fn start(&self) -> Point {
        Point::new(self.x, 0.0)
    }
}

/// Map `(x, θ)` with `θ ∈ [-π, π]` to the equivalent state with `θ ∈ [0, π]`.
///
/// Negative headings are reflected across both axes, which sends `x` to
/// `1 - x` and adds `π` to the heading.
pub fn normalize_state(x: f64, theta: f64) -> Result<StripState> {
    check_range("x", x, 0.0, 1.0, "[0, 1]")?;
    check_range("theta", theta, -PI, PI, "[-π, π]")?;
    if theta >= 0.0 {
        Ok(StripState { x, theta })
    } else {
        Ok(StripState {
            x: 1.0 - x,
            theta: theta + PI,
        })
    }
}

/// First segment length `r` and pivot angle `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strategy2 {
    pub r: f64,
    pub alpha: f64,
}

impl Strategy2 {
    pub fn new(r: f64, alpha: f64) -> Result<Self> {
        check_range("r", r, 0.0, f64::MAX, "[0, ∞)")?;
        check_range("alpha", alpha, 0.0, PI, "[0, π]")?;
        Ok(Self { r, alpha })
    }

    /// `r > 1` and `0 < π/2 - α < arccos(1/r)`: only Cases 1, 3 and 5 occur.
    pub fn check_closed_form_domain(&self) -> Result<()> {
        closed_form_domain(self.r, self.alpha)
    }
}

pub(crate) fn closed_form_domain(r: f64, alpha: f64) -> Result<()> {
    if !(r.is_finite() && alpha.is_finite()) {
        return Err(EscapeError::Domain(format!("non-finite strategy ({r}, {alpha})")));
    }
    if r <= 1.0 {
        return Err(EscapeError::Domain(format!("r = {r} must exceed 1")));
    }
    let gap = FRAC_PI_2 - alpha;
    let limit = (1.0 / r).acos();
    if !(gap > 0.0 && gap < limit) {
        return Err(EscapeError::Domain(format!(
            "π/2 - α = {gap} must lie in (0, arccos(1/r) = {limit})"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strategy3 {
    pub r: f64,
    pub alpha: f64,
    /// Second segment length.
    pub s: f64,
    /// Second pivot angle.
    pub beta: f64,
}

impl Strategy3 {
    pub fn new(r: f64, alpha: f64, s: f64, beta: f64) -> Result<Self> {
        check_range("r", r, 0.0, f64::MAX, "[0, ∞)")?;
        check_range("alpha", alpha, 0.0, PI, "[0, π]")?;
        check_range("s", s, 0.0, f64::MAX, "[0, ∞)")?;
        check_range("beta", beta, 0.0, PI, "[0, π]")?;
        Ok(Self { r, alpha, s, beta })
    }

    pub fn first_leg(&self) -> Strategy2 {
        Strategy2 {
            r: self.r,
            alpha: self.alpha,
        }
    }

    pub fn check_domain(&self) -> Result<()> {
        closed_form_domain(self.r, self.alpha)?;
        if !(self.s.is_finite() && self.s >= 0.0) {
            return Err(EscapeError::Domain(format!("s = {} must be ≥ 0", self.s)));
        }
        if !(0.0..=PI).contains(&self.beta) {
            return Err(EscapeError::Domain(format!("β = {} outside [0, π]", self.beta)));
        }
        Ok(())
    }
}

/// `arccos((1 - x)/r)`: largest heading that reaches the right shore within `r`.
/// Only meaningful when `x + r ≥ 1`.
fn right_threshold(x: f64, r: f64) -> f64 {
    if r == 0.0 {
        return FRAC_PI_2;
    }
    ((1.0 - x) / r).clamp(-1.0, 1.0).acos()
}

/// `π - arccos(x/r)`: smallest heading that reaches the left shore within `r`.
/// Only meaningful when `x ≤ r`.
fn left_threshold(x: f64, r: f64) -> f64 {
    if r == 0.0 {
        return FRAC_PI_2;
    }
    PI - (x / r).clamp(-1.0, 1.0).acos()
}

/// Truth values of the five case conditions, in order.
///
/// Exactly one holds away from the boundary set; [`classify_strip2`] picks
/// the lowest-numbered one.
pub fn strip2_conditions(state: StripState, strat: Strategy2) -> [bool; 5] {
    let StripState { x, theta } = state;
    let Strategy2 { r, alpha } = strat;
    let rr = x + r >= 1.0;
    let rl = x - r <= 0.0;
    let t1 = right_threshold(x, r);
    let t5 = left_threshold(x, r);
    let lo = FRAC_PI_2 - alpha;
    let hi = 3.0 * FRAC_PI_2 - alpha;

    let case1 = rr && theta <= t1;
    let case2 = ((rr && t1 < theta) || !rr) && theta < lo;
    let middle = (rr && rl && t1 < theta && theta < t5)
        || (!rr && rl && theta < t5)
        || (rr && !rl && t1 < theta)
        || (!rr && !rl);
    let case3 = middle && lo <= theta && theta <= hi;
    let case4 = ((rl && theta < t5) || !rl) && hi < theta;
    let case5 = rl && t5 <= theta;
    [case1, case2, case3, case4, case5]
}

const STRIP2_LABELS: [CaseLabel; 5] = [
    CaseLabel::Case1,
    CaseLabel::Case2,
    CaseLabel::Case3,
    CaseLabel::Case4,
    CaseLabel::Case5,
];

pub fn classify_strip2(state: StripState, strat: Strategy2) -> CaseLabel {
    let conds = strip2_conditions(state, strat);
    match conds.iter().position(|&c| c) {
        Some(i) => STRIP2_LABELS[i],
        // The conditions cover [0, π] for any finite r ≥ 0 and α ∈ [0, π].
        None => unreachable!("no strip case holds for {state:?}, {strat:?}"),
    }
}

fn guarded_ratio(num: f64, den: f64, angle: f64) -> Result<f64> {
    if num == 0.0 {
        return Ok(0.0);
    }
    if den.abs() < SINGULAR_EPS {
        return Err(EscapeError::Singular { angle, cosine: den });
    }
    Ok(num / den)
}

fn shore_from_start(state: StripState, right: bool) -> Result<f64> {
    let c = state.theta.cos();
    if right {
        guarded_ratio(1.0 - state.x, c, state.theta)
    } else {
        guarded_ratio(-state.x, c, state.theta)
    }
}

pub fn strip2_path_length(state: StripState, strat: Strategy2) -> Result<f64> {
    let StripState { x, theta } = state;
    let Strategy2 { r, alpha } = strat;
    match classify_strip2(state, strat) {
        CaseLabel::Case1 => shore_from_start(state, true),
        CaseLabel::Case5 => shore_from_start(state, false),
        CaseLabel::Case2 | CaseLabel::Case4 => {
            let den = cos_sum(&[theta, alpha]);
            Ok(r + guarded_ratio(x + r * theta.cos(), den, theta + alpha)?)
        }
        CaseLabel::Case3 => {
            let den = cos_sum(&[theta, alpha]);
            Ok(r + guarded_ratio(x - 1.0 + r * theta.cos(), den, theta + alpha)?)
        }
        other => unreachable!("{other} is not a two-segment strip case"),
    }
}

/// Auxiliary quantities of the 3-segment expected-length integrand at one `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeSegIntermediates {
    pub theta0: f64,
    pub kappa: f64,
    pub rho: f64,
    pub u1: f64,
    pub u2: f64,
    pub v1: f64,
    pub v2: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub eta1: f64,
    pub eta2: f64,
}

/// Distance from the start to the second pivot point.
fn kappa(r: f64, s: f64, alpha: f64) -> f64 {
    (r * r + s * s - 2.0 * r * s * alpha.cos()).max(0.0).sqrt()
}

/// `arcsin(s sin α / κ)`, evaluated as an arctangent against the
/// complementary side `|r - s cos α| = κ cos ρ` to stay accurate when the
/// arcsine argument approaches 1.
fn rho(r: f64, s: f64, alpha: f64) -> f64 {
    (s * alpha.sin()).atan2((r - s * alpha.cos()).abs())
}

/// Heading at which the second leg ends exactly on the right shore:
/// the root of `1 - x - r cos θ + s cos(θ + α) = 0` given by
/// `arcsin(s sin α / κ) + arccos((1 - x)/κ)`.
pub fn theta0(x: f64, r: f64, s: f64, alpha: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(EscapeError::Domain(format!("theta0 needs r > 0, got {r}")));
    }
    let k = kappa(r, s, alpha);
    if k == 0.0 {
        return Err(EscapeError::Domain("second pivot coincides with the start".into()));
    }
    let reach = acos_checked("(1 - x)/κ", (1.0 - x) / k)?;
    Ok(rho(r, s, alpha) + reach)
}

impl ThreeSegIntermediates {
    pub fn new(x: f64, strat: Strategy3) -> Result<Self> {
        let Strategy3 { r, alpha, s, beta } = strat;
        let kappa = kappa(r, s, alpha);
        let rho = rho(r, s, alpha);
        let theta0 = theta0(x, r, s, alpha)?;
        let reach_kappa = theta0 - rho;
        let t1 = acos_checked("(1 - x)/r", (1.0 - x) / r)?;
        let left = acos_checked("x/r", x / r)?;
        Ok(Self {
            theta0,
            kappa,
            rho,
            u1: r * alpha.sin(),
            u2: s * beta.sin() - r * (alpha + beta).sin(),
            v1: r * (1.0 + alpha.cos()),
            v2: r + s + s * beta.cos() - r * (alpha + beta).cos(),
            xi1: alpha + t1,
            xi2: alpha + beta + rho + reach_kappa,
            eta1: alpha + rho + reach_kappa,
            eta2: alpha + beta + PI - left,
        })
    }
}

pub fn classify_strip3(state: StripState, strat: Strategy3) -> CaseLabel {
    let StripState { x, theta } = state;
    let Strategy3 { r, alpha, s, .. } = strat;
    let t1 = right_threshold(x, r);
    let t5 = left_threshold(x, r);
    if theta <= t1 {
        return CaseLabel::Case1;
    }
    if theta >= t5 {
        return CaseLabel::Case5;
    }
    // If the second leg can never reach the right shore, Sub31 is empty.
    let t0 = theta0(x, r, s, alpha).unwrap_or(t1);
    if theta <= t0 {
        CaseLabel::Sub31
    } else {
        CaseLabel::Sub32
    }
}

pub fn strip3_path_length(state: StripState, strat: Strategy3) -> Result<f64> {
    let StripState { x, theta } = state;
    let Strategy3 { r, alpha, s, beta } = strat;
    match classify_strip3(state, strat) {
        CaseLabel::Case1 => shore_from_start(state, true),
        CaseLabel::Case5 => shore_from_start(state, false),
        CaseLabel::Sub31 => {
            let den = cos_sum(&[theta, alpha]);
            Ok(r + guarded_ratio(x - 1.0 + r * theta.cos(), den, theta + alpha)?)
        }
        CaseLabel::Sub32 => {
            let den = cos_sum(&[theta, alpha, beta]);
            let num = 1.0 - x + s * cos_sum(&[theta, alpha]) - r * theta.cos();
            let len = r + s + guarded_ratio(num, den, theta + alpha + beta)?;
            let real = oracle::realize(Region::Strip, state.start(), theta, &PathStrategy::Strip3(strat))?;
            if !(real.escaped && real.exit_segment == Some(2) && real.exit_side == Some(ExitSide::Right)) {
                return Err(EscapeError::InvalidPath(format!(
                    "at (x, θ) = ({x}, {theta}) the path exits {:?} on segment {:?}",
                    real.exit_side, real.exit_segment
                )));
            }
            Ok(len)
        }
        other => unreachable!("{other} is not a three-segment strip case"),
    }
}
