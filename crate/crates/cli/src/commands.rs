use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use lost_at_sea::disk::DiskStrategy;
use lost_at_sea::geom::{deg, rad};
use lost_at_sea::gevirtz::{a_gamma_arc, a_gamma_mc, arcs_disjoint, trace_curve, TurningCurve, DEFAULT_PROBES};
use lost_at_sea::montecarlo::{estimate_mean_with, estimate_median_with, sweep_median, DiskSampling, McConfig, McEstimate, Scenario};
use lost_at_sea::numerics::{minimize, Bounds, MinimizeOptions, OptimizationResult, QuadratureSpec};
use lost_at_sea::objectives::{disk_expected, disk_objective, strip2_expected, strip2_expected_quad, strip3_expected, ObjectiveValue, DISK_STRAIGHT_MEAN};
use lost_at_sea::oracle::PathStrategy;
use lost_at_sea::paper_check::{run_criterion, CriterionResult};
use lost_at_sea::plot::figure;
use lost_at_sea::solve::{disk_grid, grid_minimum, linspace, optimize_strip2, optimize_strip3, strip3_options, STRIP2_START};
use lost_at_sea::strip::{Strategy2, Strategy3};
use lost_at_sea::zalgaller::evaluate_zalgaller;
use serde_json::{json, Value};

use crate::{
    EvaluateArgs, Family, Format, GevirtzArgs, McArgs, MedianArgs, Method, OptimizeArgs, PaperCheckArgs, PlotArgs, Sampling,
    ScenarioArg, StrategyKind, StrategyParams,
};

pub const SCHEMA_VERSION: u32 = 1;

pub struct Outcome {
    pub body: String,
    pub code: u8,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, code: 0 }
    }
}

type CmdResult = Result<Outcome, String>;

pub fn emit(outcome: &Outcome, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, &outcome.body).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(outcome.body.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
                _ => Ok(()),
            }
        }
    }
}

fn envelope(command: &str, mut body: Value) -> String {
    let obj = body.as_object_mut().expect("command bodies are objects");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(command));
    let mut s = serde_json::to_string_pretty(&body).expect("JSON values serialize");
    s.push('\n');
    s
}

fn csv_only_for(cmd: &str, format: Option<Format>) -> Result<(), String> {
    if format == Some(Format::Csv) {
        Err(format!("{cmd} has no CSV output"))
    } else {
        Ok(())
    }
}

fn required(v: Option<f64>, flag: &str) -> Result<f64, String> {
    v.ok_or_else(|| format!("--{flag} is required for this strategy"))
}

fn strategy2(p: &StrategyParams) -> Result<Strategy2, String> {
    Strategy2::new(required(p.r, "r")?, rad(required(p.alpha, "alpha")?)).map_err(|e| e.to_string())
}

fn strategy3(p: &StrategyParams) -> Result<Strategy3, String> {
    Strategy3::new(
        required(p.r, "r")?,
        rad(required(p.alpha, "alpha")?),
        required(p.s, "s")?,
        rad(required(p.beta, "beta")?),
    )
    .map_err(|e| e.to_string())
}

fn disk_strategy(p: &StrategyParams) -> Result<DiskStrategy, String> {
    DiskStrategy::new(required(p.r, "r")?, rad(required(p.alpha, "alpha")?)).map_err(|e| e.to_string())
}

fn strategy_json(s: &PathStrategy) -> Value {
    match *s {
        PathStrategy::Straight => json!({ "kind": "straight" }),
        PathStrategy::Strip2(Strategy2 { r, alpha }) => {
            json!({ "kind": "strip2", "r": r, "alpha": alpha, "alpha_deg": deg(alpha) })
        }
        PathStrategy::Disk2(DiskStrategy { r, alpha }) => {
            json!({ "kind": "disk2", "r": r, "alpha": alpha, "alpha_deg": deg(alpha) })
        }
        PathStrategy::Strip3(Strategy3 { r, alpha, s, beta }) => json!({
            "kind": "strip3", "r": r, "alpha": alpha, "alpha_deg": deg(alpha),
            "s": s, "beta": beta, "beta_deg": deg(beta),
        }),
    }
}

fn options(tol: Option<f64>, max_evals: Option<usize>, base: MinimizeOptions) -> Result<MinimizeOptions, String> {
    let mut o = base;
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(format!("--tol must be positive, got {t}"));
        }
        o.tol = t;
    }
    if let Some(m) = max_evals {
        o.max_evals = m;
    }
    Ok(o)
}

fn optimization_body(family: &str, strat: PathStrategy, r: &OptimizationResult, seed: Option<u64>) -> Value {
    json!({
        "family": family,
        "params": strategy_json(&strat),
        "value": r.value,
        "evaluations": r.evaluations,
        "converged": r.converged,
        "start_index": r.start_index,
        "seed": seed,
    })
}

fn finish_optimization(body: Value, converged: bool) -> Outcome {
    Outcome { body: envelope("optimize", body), code: if converged { 0 } else { 2 } }
}

pub fn optimize(a: &OptimizeArgs, format: Option<Format>) -> CmdResult {
    if a.grid && a.family != Family::Disk2 {
        return Err("--grid applies to disk2 only".into());
    }
    match a.family {
        Family::Strip2 => {
            csv_only_for("optimize strip2", format)?;
            let r = optimize_strip2(STRIP2_START, &options(a.tol, a.max_evals, MinimizeOptions::default())?);
            let s = PathStrategy::Strip2(Strategy2 { r: r.params[0], alpha: r.params[1] });
            Ok(finish_optimization(optimization_body("strip2", s, &r, None), r.converged))
        }
        Family::Strip3 => {
            csv_only_for("optimize strip3", format)?;
            if a.multistart == 0 {
                return Err("--multistart must be at least 1".into());
            }
            let opts = options(a.tol, a.max_evals, strip3_options())?;
            let r = optimize_strip3(a.multistart, a.seed, &opts, &QuadratureSpec::default());
            let p = &r.params;
            let s = PathStrategy::Strip3(Strategy3 { r: p[0], alpha: p[1], s: p[2], beta: p[3] });
            let mut body = optimization_body("strip3", s, &r, Some(a.seed));
            body["starts"] = json!(a.multistart);
            Ok(finish_optimization(body, r.converged))
        }
        Family::Disk2 if a.grid => disk_grid_report(a.grid_size, format),
        Family::Disk2 => {
            csv_only_for("optimize disk2", format)?;
            let spec = QuadratureSpec::default();
            let f = disk_objective(&spec);
            let bounds = Bounds::new(vec![0.05, 0.05], vec![2.0, PI]);
            let r = minimize(&f, &[1.0, 2.0], &bounds, &options(a.tol, a.max_evals, MinimizeOptions::default())?);
            let s = PathStrategy::Disk2(DiskStrategy { r: r.params[0], alpha: r.params[1] });
            let mut body = optimization_body("disk2", s, &r, None);
            body["straight_mean"] = json!(DISK_STRAIGHT_MEAN);
            Ok(finish_optimization(body, r.converged))
        }
    }
}

fn disk_grid_report(n: usize, format: Option<Format>) -> CmdResult {
    if n < 2 {
        return Err("--grid-size must be at least 2".into());
    }
    // r = 2 is left out: the first leg alone always escapes, so every α ties.
    let rs = linspace(2.0 / (n + 1) as f64, 2.0 * n as f64 / (n + 1) as f64, n);
    let alphas = linspace(PI / n as f64, PI, n);
    let grid = disk_grid(&rs, &alphas, &QuadratureSpec::default()).map_err(|e| e.to_string())?;
    if format == Some(Format::Csv) {
        let mut s = String::from("r,alpha,alpha_deg,value\n");
        for g in &grid {
            writeln!(s, "{},{},{},{}", g.r, g.alpha, deg(g.alpha), g.value).unwrap();
        }
        return Ok(Outcome::ok(s));
    }
    let best = grid_minimum(&grid).expect("grid is non-empty");
    let cells: Vec<Value> = grid
        .iter()
        .map(|g| json!({ "r": g.r, "alpha": g.alpha, "alpha_deg": deg(g.alpha), "value": g.value }))
        .collect();
    Ok(Outcome::ok(envelope(
        "optimize",
        json!({
            "family": "disk2",
            "grid_size": n,
            "minimum": { "r": best.r, "alpha": best.alpha, "alpha_deg": deg(best.alpha), "value": best.value },
            "straight_mean": DISK_STRAIGHT_MEAN,
            "grid": cells,
        }),
    )))
}

fn objective_json(v: &ObjectiveValue) -> Value {
    json!({ "value": v.value, "est_error": v.est_error, "method": v.method })
}

pub fn evaluate(a: &EvaluateArgs) -> CmdResult {
    let spec = QuadratureSpec::default();
    if a.method == Method::Quad && a.family != Family::Strip2 {
        return Err("--method applies to strip2 only".into());
    }
    let (strat, value) = match a.family {
        Family::Strip2 => {
            let s = strategy2(&a.params)?;
            let v = match a.method {
                Method::Closed => strip2_expected(s),
                Method::Quad => strip2_expected_quad(s, &spec),
            };
            (PathStrategy::Strip2(s), v)
        }
        Family::Strip3 => {
            let s = strategy3(&a.params)?;
            (PathStrategy::Strip3(s), strip3_expected(s, &spec))
        }
        Family::Disk2 => {
            let s = disk_strategy(&a.params)?;
            (PathStrategy::Disk2(s), disk_expected(s, &spec))
        }
    };
    let value = value.map_err(|e| e.to_string())?;
    let mut body = objective_json(&value);
    body["strategy"] = strategy_json(&strat);
    Ok(Outcome::ok(envelope("evaluate", body)))
}

fn scenario(s: ScenarioArg) -> Scenario {
    match s {
        ScenarioArg::Strip => Scenario::Strip,
        ScenarioArg::Disk => Scenario::Disk,
    }
}

fn mc_strategy(a: &McArgs, p: &StrategyParams) -> Result<PathStrategy, String> {
    Ok(match (a.strategy, a.scenario) {
        (StrategyKind::Straight, _) => PathStrategy::Straight,
        (StrategyKind::Two, ScenarioArg::Strip) => PathStrategy::Strip2(strategy2(p)?),
        (StrategyKind::Two, ScenarioArg::Disk) => PathStrategy::Disk2(disk_strategy(p)?),
        (StrategyKind::Three, ScenarioArg::Strip) => PathStrategy::Strip3(strategy3(p)?),
        (StrategyKind::Three, ScenarioArg::Disk) => return Err("3-segment strategies are defined for the strip only".into()),
    })
}

fn mc_config(a: &McArgs) -> Result<McConfig, String> {
    if a.n < 1000 {
        return Err(format!("--n must be at least 1000, got {}", a.n));
    }
    let disk_sampling = match a.sampling {
        Sampling::Area => DiskSampling::AreaUniform,
        Sampling::Radius => DiskSampling::UniformRadius,
    };
    Ok(McConfig { disk_sampling, ..McConfig::new(a.n, a.seed) })
}

fn sampling_name(a: &McArgs) -> &'static str {
    match (a.scenario, a.sampling) {
        (ScenarioArg::Strip, _) => "uniform",
        (ScenarioArg::Disk, Sampling::Area) => "area",
        (ScenarioArg::Disk, Sampling::Radius) => "radius",
    }
}

fn estimate_body(a: &McArgs, strat: &PathStrategy, est: &McEstimate, statistic: &str) -> Value {
    json!({
        "scenario": match a.scenario { ScenarioArg::Strip => "strip", ScenarioArg::Disk => "disk" },
        "sampling": sampling_name(a),
        "strategy": strategy_json(strat),
        "statistic": statistic,
        "estimate": est.point,
        "error_bar": est.std_error,
        "error_bar_kind": if statistic == "mean" { "standard error" } else { "99% interval half-width" },
        "n": est.n,
        "seed": est.seed,
        "heavy_tail": est.heavy_tail,
        "failures": est.failures,
    })
}

pub fn simulate(a: &McArgs) -> CmdResult {
    let strat = mc_strategy(a, &a.params)?;
    let est = estimate_mean_with(scenario(a.scenario), &strat, &mc_config(a)?).map_err(|e| e.to_string())?;
    let mut body = estimate_body(a, &strat, &est, "mean");
    if est.heavy_tail {
        body["warning"] = json!("a few samples dominate the sum; the mean may not exist");
    }
    Ok(Outcome::ok(envelope("simulate", body)))
}

pub fn median(a: &MedianArgs, format: Option<Format>) -> CmdResult {
    let mc = &a.mc;
    let cfg = mc_config(mc)?;
    if a.sweep_r.is_empty() {
        csv_only_for("median without --sweep-r", format)?;
        let strat = mc_strategy(mc, &mc.params)?;
        let est = estimate_median_with(scenario(mc.scenario), &strat, &cfg).map_err(|e| e.to_string())?;
        return Ok(Outcome::ok(envelope("median", estimate_body(mc, &strat, &est, "median"))));
    }
    if mc.strategy != StrategyKind::Two {
        return Err("--sweep-r needs --strategy two".into());
    }
    let grid = a
        .sweep_r
        .iter()
        .map(|&r| mc_strategy(mc, &StrategyParams { r: Some(r), ..mc.params }))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = sweep_median(scenario(mc.scenario), &grid, &cfg).map_err(|e| e.to_string())?;
    if format == Some(Format::Csv) {
        let mut s = String::from("r,alpha,alpha_deg,median,ci_half_width,n,seed,failures\n");
        for row in &rows {
            let (r, alpha) = match row.strategy {
                PathStrategy::Strip2(Strategy2 { r, alpha }) | PathStrategy::Disk2(DiskStrategy { r, alpha }) => (r, alpha),
                _ => unreachable!("sweeps use 2-segment strategies"),
            };
            let m = &row.median;
            writeln!(s, "{r},{alpha},{},{},{},{},{},{}", deg(alpha), m.point, m.std_error, m.n, m.seed, m.failures).unwrap();
        }
        return Ok(Outcome::ok(s));
    }
    let rows: Vec<Value> = rows.iter().map(|row| estimate_body(mc, &row.strategy, &row.median, "median")).collect();
    Ok(Outcome::ok(envelope("median", json!({ "n": cfg.n, "seed": cfg.seed, "rows": rows }))))
}

pub fn zalgaller() -> CmdResult {
    let rep = evaluate_zalgaller().map_err(|e| e.to_string())?;
    let three = rep.three_segment_fit.map(|s| strategy_json(&PathStrategy::Strip3(s)));
    Ok(Outcome::ok(envelope(
        "zalgaller",
        json!({
            "r": rep.fit.r,
            "alpha": rep.fit.alpha,
            "alpha_deg": rep.alpha_deg,
            "expected": rep.expected,
            "expected_at_rounded_params": rep.expected_rounded,
            "three_segment_fit": three,
            "three_segment_expected": rep.three_segment_expected,
            "strip2_optimum": rep.strip2_optimum,
            "strip3_optimum": rep.strip3_optimum,
            "zalgaller_claim": rep.zalgaller_claim,
            "ordering_holds": rep.ordering_holds,
        }),
    )))
}

pub fn gevirtz(a: &GevirtzArgs) -> CmdResult {
    let curve = match (&a.source.curve, a.source.curvature) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            text.parse::<TurningCurve>().map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, Some(k)) => TurningCurve::constant_curvature(k, rad(a.phi_max)).map_err(|e| e.to_string())?,
        (None, None) => unreachable!("clap requires one curve source"),
    };
    let frame = trace_curve(&curve).map_err(|e| e.to_string())?;
    let disjoint = arcs_disjoint(&frame, DEFAULT_PROBES);
    let mut body = json!({
        "s_star": frame.s_star,
        "phi_max": curve.phi_max(),
        "phi_max_deg": deg(curve.phi_max()),
        "knots": curve.knots().len(),
        "arcs_disjoint": disjoint,
        "bound": DISK_STRAIGHT_MEAN,
    });
    if disjoint {
        let a_gamma = a_gamma_arc(&frame, &QuadratureSpec::with_abs_tol(1e-12)).map_err(|e| e.to_string())?;
        body["a_gamma"] = json!(a_gamma);
        body["slack"] = json!(a_gamma - DISK_STRAIGHT_MEAN);
        body["holds"] = json!(a_gamma >= DISK_STRAIGHT_MEAN - 1e-12);
    } else {
        body["a_gamma"] = Value::Null;
        body["note"] = json!("arcs intersect; the arc formula does not apply (use --mc)");
    }
    if let Some(n) = a.mc {
        let est = a_gamma_mc(&frame, n, a.seed).map_err(|e| e.to_string())?;
        body["mc"] = json!({ "estimate": est.point, "std_error": est.std_error, "n": est.n, "seed": est.seed });
    }
    Ok(Outcome::ok(envelope("gevirtz", body)))
}

pub fn plot(a: &PlotArgs) -> CmdResult {
    let fig: u32 = a.figure.parse().expect("clap restricts the figure number");
    figure(fig).map(Outcome::ok).map_err(|e| e.to_string())
}

fn criteria_csv(results: &[CriterionResult]) -> String {
    let mut s = String::from("id,passed,seconds,title\n");
    for r in results {
        writeln!(s, "{},{},{:.3},\"{}\"", r.id, r.passed, r.seconds, r.title.replace('"', "\"\"")).unwrap();
    }
    s
}

pub fn paper_check(a: &PaperCheckArgs, format: Option<Format>) -> CmdResult {
    let ids: Vec<u32> = if a.only.is_empty() { (1..=10).collect() } else { a.only.clone() };
    let mut results = Vec::new();
    for id in ids {
        let r = run_criterion(id).expect("ids are validated by clap");
        // Progress goes to stderr so structured output stays clean.
        if format.is_some() {
            eprintln!("{}", r.line());
        }
        results.push(r);
    }
    let all_passed = results.iter().all(|r| r.passed);
    let body = match format {
        None => {
            let mut s: String = results.iter().map(|r| r.line() + "\n").collect();
            let passed = results.iter().filter(|r| r.passed).count();
            writeln!(s, "{passed} of {} criteria pass", results.len()).unwrap();
            s
        }
        Some(Format::Json) => envelope("paper-check", json!({ "passed": all_passed, "criteria": results })),
        Some(Format::Csv) => criteria_csv(&results),
    };
    Ok(Outcome { body, code: if all_passed { 0 } else { 3 } })
}
