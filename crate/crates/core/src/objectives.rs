//! Expected escape lengths as functions of the strategy parameters.
//!
//! Strip: start `x ~ U[0, 1]`, heading uniform, which after normalization is
//! `θ ~ U[0, π]`. Disk: start uniform on the disk, heading uniform on
//! `[-π, π]`. Every objective comes with an independent integral twin or a
//! Monte Carlo cross-check elsewhere in the crate.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::disk::{chord, disk_geometry, disk_phi, DiskState, DiskStrategy};
use crate::error::{EscapeError, Result};
use crate::geom::cos_sum;
use crate::numerics::{try_integrate, QuadratureSpec, PENALTY};
use crate::strip::{closed_form_domain, Strategy2, Strategy3, ThreeSegIntermediates};

/// `8/(3π)`: mean straight-line escape distance in the unit disk.
pub const DISK_STRAIGHT_MEAN: f64 = 8.0 / (3.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveValue {
    /// Expected path length in strip widths or disk radii.
    pub value: f64,
    pub method: Method,
    pub est_error: f64,
}

fn ln_positive(what: &str, arg: f64) -> Result<f64> {
    if arg > 0.0 && arg.is_finite() {
        Ok(arg.ln())
    } else {
        Err(EscapeError::Domain(format!("logarithm of non-positive {what} = {arg}")))
    }
}

/// Expected length of the 2-segment strip strategy, in closed form.
///
/// Valid for `r > 1` and `0 < π/2 - α < arccos(1/r)`, where only Cases 1, 3
/// and 5 occur. The expression is π times the expectation; it is divided
/// by π on return.
pub fn strip2_expected(strat: Strategy2) -> Result<ObjectiveValue> {
    let Strategy2 { r, alpha } = strat;
    closed_form_domain(r, alpha)?;
    let q = (r * r - 1.0).sqrt();
    let (sa, ca) = alpha.sin_cos();
    let rs2 = r * r * sa * sa;

    let mut total = r * ((1.0 + ca) * (FRAC_PI_2 + q - r) - (2.0 + ca) * (1.0 / r).acos() + FRAC_PI_2);
    total += ln_positive("√(r²-1) + r", q + r)?;
    total += 0.5 * r * r * ln_positive("1 - cos α", 1.0 - ca)? * sa * sa;
    total += r * sa * ln_positive("(√(r²-1) sin α - cos α)/(r sin α)", (q * sa - ca) / (r * sa))?;
    total += 0.25 * (rs2 + 1.0) * ln_positive("√(r²-1) cos α + sin α + r", q * ca + sa + r)?;
    total += 0.25 * (rs2 - 1.0) * ln_positive("√(r²-1) cos α - sin α + r", q * ca - sa + r)?;
    total -= 0.25
        * (rs2 + 1.0)
        * ln_positive("first bracket", -q * ca * ca - (sa + q - r) * ca - sa + r)?;
    total -= 0.25
        * (rs2 - 1.0)
        * ln_positive("second bracket", -q * ca * ca + (sa - q + r) * ca + sa + r)?;

    Ok(ObjectiveValue {
        value: total / PI,
        method: Method::ClosedForm,
        est_error: 1e-15 * total.abs(),
    })
}

/// The same expectation as [`strip2_expected`], by nested quadrature of the
/// Case 1, 3 and 5 lengths.
pub fn strip2_expected_quad(strat: Strategy2, spec: &QuadratureSpec) -> Result<ObjectiveValue> {
    let Strategy2 { r, alpha } = strat;
    closed_form_domain(r, alpha)?;
    let inner = spec.scaled(0.1);
    let outer = try_integrate(
        |x| -> Result<f64> {
            let t1 = ((1.0 - x) / r).acos();
            let t5 = PI - (x / r).acos();
            let c1 = try_integrate(|t| Ok::<_, EscapeError>((1.0 - x) / t.cos()), 0.0, t1, &inner)?;
            let c3 = try_integrate(
                |t| Ok::<_, EscapeError>(r + (x - 1.0 + r * t.cos()) / cos_sum(&[t, alpha])),
                t1,
                t5,
                &inner,
            )?;
            let c5 = try_integrate(|t| Ok::<_, EscapeError>(-x / t.cos()), t5, PI, &inner)?;
            Ok(c1.value + c3.value + c5.value)
        },
        0.0,
        1.0,
        spec,
    )?;
    Ok(ObjectiveValue {
        value: outer.value / PI,
        method: Method::Quadrature,
        est_error: (outer.error + inner.abs_tol) / PI,
    })
}

/// Right-shore threshold `T1`, left-shore threshold `T5` and `θ₀` at `x`,
/// after checking that the 3-segment formulas describe the real paths:
/// `T1 ≤ θ₀ ≤ T5`, the third leg heads toward the right shore, and the second
/// pivot point stays inside the strip for every Sub32 heading.
fn sub32_window(x: f64, strat: Strategy3, inter: &ThreeSegIntermediates) -> Result<(f64, f64, f64)> {
    let Strategy3 { r, alpha, s, beta } = strat;
    let t1 = ((1.0 - x) / r).acos();
    let t5 = PI - (x / r).acos();
    let t0 = inter.theta0;
    const SLACK: f64 = 1e-12;
    if t0 < t1 - SLACK || t0 > t5 + SLACK {
        return Err(EscapeError::Domain(format!(
            "θ₀ = {t0} outside [{t1}, {t5}] at x = {x}"
        )));
    }
    for t in [t0, t5] {
        if cos_sum(&[t, alpha, beta]) <= 0.0 {
            return Err(EscapeError::InvalidPath(format!(
                "third leg does not head to the right shore at x = {x}, θ = {t}"
            )));
        }
    }
    // Second pivot abscissa x + r cos θ - s cos(θ + α) = x + a cos θ + b sin θ.
    let a = r - s * alpha.cos();
    let b = s * alpha.sin();
    let pivot_x = |t: f64| x + a * t.cos() + b * t.sin();
    let phase = b.atan2(a);
    let mut lo = pivot_x(t0).min(pivot_x(t5));
    let mut hi = pivot_x(t0).max(pivot_x(t5));
    for k in -2..=3 {
        let t = phase + k as f64 * PI;
        if t > t0 && t < t5 {
            lo = lo.min(pivot_x(t));
            hi = hi.max(pivot_x(t));
        }
    }
    if lo < -SLACK || hi > 1.0 + SLACK {
        return Err(EscapeError::InvalidPath(format!(
            "second pivot leaves the strip (x-range [{lo}, {hi}]) at x = {x}"
        )));
    }
    Ok((t1, t5, t0))
}

/// `p₁ + p₂`: the θ-integrals of the Sub31 and Sub32 lengths at `x`.
fn strip3_p_sum(x: f64, strat: Strategy3) -> Result<f64> {
    let inter = ThreeSegIntermediates::new(x, strat)?;
    sub32_window(x, strat, &inter)?;
    let terms = [
        (inter.u1, inter.v1, inter.xi1, inter.eta1, -1.0),
        (inter.u2, inter.v2, inter.xi2, inter.eta2, 1.0),
    ];
    let mut total = 0.0;
    for (u, v, xi, eta, sign) in terms {
        let (sx, se) = (xi.sin(), eta.sin());
        let ratio = (sx * (se + 1.0) - se - 1.0) / (sx * (se - 1.0) + se - 1.0);
        let cos_ratio = (xi.cos() / eta.cos()).abs();
        total += u * ln_positive("|cos ξ / cos η|", cos_ratio)?
            + sign * 0.5 * (1.0 - x) * ln_positive("secant ratio", ratio)?
            + v * (eta - xi);
    }
    Ok(total)
}

/// Expected length of the 3-segment strip strategy.
///
/// Cases 1 and 5 integrate in closed form; the Sub31/Sub32 θ-integrals are
/// closed form in θ and integrated over `x` numerically.
pub fn strip3_expected(strat: Strategy3, spec: &QuadratureSpec) -> Result<ObjectiveValue> {
    strat.check_domain()?;
    let r = strat.r;
    // The endpoints are never quadrature nodes; check them explicitly.
    strip3_p_sum(0.0, strat)?;
    strip3_p_sum(1.0, strat)?;
    let q = (r * r - 1.0).sqrt();
    let closed = ln_positive("√(r²-1) + r", q + r)? + r * (r - q);
    let integral = try_integrate(|x| strip3_p_sum(x, strat), 0.0, 1.0, spec)?;
    Ok(ObjectiveValue {
        value: (closed + integral.value) / PI,
        method: Method::Quadrature,
        est_error: integral.error / PI,
    })
}

/// Nested quadrature of the four 3-segment case lengths.
pub fn strip3_expected_quad(strat: Strategy3, spec: &QuadratureSpec) -> Result<ObjectiveValue> {
    strat.check_domain()?;
    let Strategy3 { r, alpha, s, beta } = strat;
    let inner = spec.scaled(0.1);
    let outer = try_integrate(
        |x| -> Result<f64> {
            let inter = ThreeSegIntermediates::new(x, strat)?;
            let (t1, t5, t0) = sub32_window(x, strat, &inter)?;
            let ok = |v: f64| Ok::<_, EscapeError>(v);
            let c1 = try_integrate(|t| ok((1.0 - x) / t.cos()), 0.0, t1, &inner)?;
            let c31 = try_integrate(
                |t| ok(r + (x - 1.0 + r * t.cos()) / cos_sum(&[t, alpha])),
                t1,
                t0,
                &inner,
            )?;
            let c32 = try_integrate(
                |t| {
                    ok(r + s
                        + (1.0 - x + s * cos_sum(&[t, alpha]) - r * t.cos()) / cos_sum(&[t, alpha, beta]))
                },
                t0,
                t5,
                &inner,
            )?;
            let c5 = try_integrate(|t| ok(-x / t.cos()), t5, PI, &inner)?;
            Ok(c1.value + c31.value + c32.value + c5.value)
        },
        0.0,
        1.0,
        spec,
    )?;
    Ok(ObjectiveValue {
        value: outer.value / PI,
        method: Method::Quadrature,
        est_error: (outer.error + inner.abs_tol) / PI,
    })
}

/// Expected length of the 2-segment disk strategy, `I + J`.
///
/// `I` covers starts with `x ≥ |r - 1|` (headings within `±φ` escape during
/// the first leg); `J` covers the inner disk where the first leg either always
/// escapes (`r ≥ 1`) or never does (`r < 1`).
pub fn disk_expected(strat: DiskStrategy, spec: &QuadratureSpec) -> Result<ObjectiveValue> {
    let DiskStrategy { r, alpha } = DiskStrategy::new(strat.r, strat.alpha)?;
    let inner = spec.scaled(0.1);
    let two_leg = move |x: f64, t: f64| -> Result<f64> {
        let g = disk_geometry(DiskState { x, theta: t }, DiskStrategy { r, alpha })?;
        Ok(r + g.s)
    };
    let two_leg_splits = |x: f64| -> Vec<f64> {
        if x > 0.0 && r <= x {
            let psi = (-r / x).clamp(-1.0, 1.0).acos();
            vec![-psi, psi]
        } else {
            Vec::new()
        }
    };
    let lower = (r - 1.0).abs();

    // I
    let i_part = if lower < 1.0 {
        let outer_spec = QuadratureSpec {
            split_points: vec![r],
            ..spec.clone()
        };
        try_integrate(
            |x| -> Result<f64> {
                let phi = disk_phi(x, r)?;
                let splits = inner.clone().with_splits(two_leg_splits(x));
                let a = try_integrate(|t| Ok::<_, EscapeError>(chord(x, t)), -phi, phi, &inner)?;
                let b = try_integrate(|t| two_leg(x, t), phi, PI, &splits)?;
                let c = try_integrate(|t| two_leg(x, t), -PI, -phi, &splits)?;
                Ok((a.value + b.value + c.value) * x)
            },
            lower,
            1.0,
            &outer_spec,
        )?
    } else {
        Default::default()
    };

    // J
    let j_part = if r >= 1.0 {
        let upper = (r - 1.0).min(1.0);
        try_integrate(
            |x| -> Result<f64> {
                let g = try_integrate(|t| Ok::<_, EscapeError>(chord(x, t)), -PI, PI, &inner)?;
                Ok(g.value * x)
            },
            0.0,
            upper,
            spec,
        )?
    } else {
        let outer_spec = QuadratureSpec {
            split_points: vec![r],
            ..spec.clone()
        };
        try_integrate(
            |x| -> Result<f64> {
                let splits = inner.clone().with_splits(two_leg_splits(x));
                let h = try_integrate(|t| two_leg(x, t), -PI, PI, &splits)?;
                Ok(h.value * x)
            },
            0.0,
            1.0 - r,
            &outer_spec,
        )?
    };

    Ok(ObjectiveValue {
        value: (i_part.value + j_part.value) / PI,
        method: Method::Quadrature,
        est_error: (i_part.error + j_part.error + 2.0 * inner.abs_tol) / PI,
    })
}

/// `[r, α] ↦ E`, with [`PENALTY`] outside the closed-form domain.
pub fn strip2_objective(params: &[f64]) -> f64 {
    strip2_expected(Strategy2 {
        r: params[0],
        alpha: params[1],
    })
    .map(|v| v.value)
    .unwrap_or(PENALTY)
}

/// `[r, α, s, β] ↦ E`, with [`PENALTY`] where the 3-segment formulas do not apply.
pub fn strip3_objective(spec: &QuadratureSpec) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
    move |p: &[f64]| {
        strip3_expected(
            Strategy3 {
                r: p[0],
                alpha: p[1],
                s: p[2],
                beta: p[3],
            },
            spec,
        )
        .map(|v| v.value)
        .unwrap_or(PENALTY)
    }
}

pub fn disk_objective(spec: &QuadratureSpec) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
    move |p: &[f64]| {
        disk_expected(DiskStrategy { r: p[0], alpha: p[1] }, spec)
            .map(|v| v.value)
            .unwrap_or(PENALTY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_at_known_optimum() {
        let v = strip2_expected(Strategy2 { r: 1.0432668686, alpha: 1.3734935859 }).unwrap();
        assert!((v.value - 0.8869669056).abs() < 1e-10, "{}", v.value);
        assert_eq!(v.method, Method::ClosedForm);
    }

    #[test]
    fn closed_form_refuses_outside_domain() {
        assert!(strip2_expected(Strategy2 { r: 0.95, alpha: 1.3 }).is_err());
        assert_eq!(strip2_objective(&[0.95, 1.3]), PENALTY);
    }

    #[test]
    fn disk_long_first_leg_is_straight() {
        let v = disk_expected(DiskStrategy { r: 2.0, alpha: 0.7 }, &QuadratureSpec::with_abs_tol(1e-9)).unwrap();
        assert!((v.value - DISK_STRAIGHT_MEAN).abs() < 1e-8);
    }

    #[test]
    fn strip3_collapses_to_strip2_at_straight_second_pivot() {
        let two = strip2_expected(Strategy2 { r: 1.0432668686, alpha: 1.3734935859 }).unwrap();
        let three = strip3_expected(
            Strategy3 { r: 1.0432668686, alpha: 1.3734935859, s: 0.3, beta: PI },
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((two.value - three.value).abs() < 1e-9);
    }
}
