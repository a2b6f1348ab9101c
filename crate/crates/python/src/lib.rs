//! Python bindings. Angles are in radians throughout.

use lost_at_sea as core;
use lost_at_sea::disk::DiskState;
use lost_at_sea::gevirtz::TurningCurve;
use lost_at_sea::montecarlo::{DiskSampling, McConfig};
use lost_at_sea::numerics::{MinimizeOptions, QuadratureSpec};
use lost_at_sea::oracle::PathStrategy;
use lost_at_sea::strip::normalize_state;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: core::EscapeError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Strategy2", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyStrategy2(core::Strategy2);

#[pymethods]
impl PyStrategy2 {
    #[new]
    fn new(r: f64, alpha: f64) -> PyResult<Self> {
        core::Strategy2::new(r, alpha).map(Self).map_err(err)
    }
    #[getter]
    fn r(&self) -> f64 {
        self.0.r
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }
    fn __repr__(&self) -> String {
        format!("Strategy2(r={}, alpha={})", self.0.r, self.0.alpha)
    }
}

#[pyclass(name = "Strategy3", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyStrategy3(core::Strategy3);

#[pymethods]
impl PyStrategy3 {
    #[new]
    fn new(r: f64, alpha: f64, s: f64, beta: f64) -> PyResult<Self> {
        core::Strategy3::new(r, alpha, s, beta).map(Self).map_err(err)
    }
    #[getter]
    fn r(&self) -> f64 {
        self.0.r
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }
    #[getter]
    fn s(&self) -> f64 {
        self.0.s
    }
    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta
    }
    fn __repr__(&self) -> String {
        let s = self.0;
        format!("Strategy3(r={}, alpha={}, s={}, beta={})", s.r, s.alpha, s.s, s.beta)
    }
}

#[pyclass(name = "DiskStrategy", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyDiskStrategy(core::DiskStrategy);

#[pymethods]
impl PyDiskStrategy {
    #[new]
    fn new(r: f64, alpha: f64) -> PyResult<Self> {
        core::DiskStrategy::new(r, alpha).map(Self).map_err(err)
    }
    #[getter]
    fn r(&self) -> f64 {
        self.0.r
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }
    fn __repr__(&self) -> String {
        format!("DiskStrategy(r={}, alpha={})", self.0.r, self.0.alpha)
    }
}

#[pyclass(name = "McEstimate", frozen, get_all)]
struct PyMcEstimate {
    point: f64,
    std_error: f64,
    n: usize,
    seed: u64,
    heavy_tail: bool,
    failures: usize,
}

impl From<core::McEstimate> for PyMcEstimate {
    fn from(e: core::McEstimate) -> Self {
        Self { point: e.point, std_error: e.std_error, n: e.n, seed: e.seed, heavy_tail: e.heavy_tail, failures: e.failures }
    }
}

#[pymethods]
impl PyMcEstimate {
    fn __repr__(&self) -> String {
        format!("McEstimate(point={}, std_error={}, n={}, seed={})", self.point, self.std_error, self.n, self.seed)
    }
}

#[pyclass(name = "OptimizationResult", frozen, get_all)]
struct PyOptimizationResult {
    params: Vec<f64>,
    value: f64,
    evaluations: usize,
    converged: bool,
    start_index: usize,
}

impl From<core::OptimizationResult> for PyOptimizationResult {
    fn from(r: core::OptimizationResult) -> Self {
        Self { params: r.params, value: r.value, evaluations: r.evaluations, converged: r.converged, start_index: r.start_index }
    }
}

#[pymethods]
impl PyOptimizationResult {
    fn __repr__(&self) -> String {
        format!("OptimizationResult(params={:?}, value={}, converged={})", self.params, self.value, self.converged)
    }
}

/// `None` means the straight path.
fn path_strategy(obj: Option<&Bound<'_, PyAny>>) -> PyResult<PathStrategy> {
    let Some(obj) = obj else {
        return Ok(PathStrategy::Straight);
    };
    if let Ok(s) = obj.extract::<PyStrategy2>() {
        Ok(PathStrategy::Strip2(s.0))
    } else if let Ok(s) = obj.extract::<PyStrategy3>() {
        Ok(PathStrategy::Strip3(s.0))
    } else if let Ok(s) = obj.extract::<PyDiskStrategy>() {
        Ok(PathStrategy::Disk2(s.0))
    } else {
        Err(PyValueError::new_err("expected Strategy2, Strategy3, DiskStrategy or None"))
    }
}

fn scenario(name: &str) -> PyResult<core::Scenario> {
    match name {
        "strip" => Ok(core::Scenario::Strip),
        "disk" => Ok(core::Scenario::Disk),
        _ => Err(PyValueError::new_err(format!("scenario must be 'strip' or 'disk', got {name:?}"))),
    }
}

fn sampling(name: &str) -> PyResult<DiskSampling> {
    match name {
        "area" => Ok(DiskSampling::AreaUniform),
        "radius" => Ok(DiskSampling::UniformRadius),
        _ => Err(PyValueError::new_err(format!("sampling must be 'area' or 'radius', got {name:?}"))),
    }
}

#[pyfunction]
fn strip2_expected(strat: PyStrategy2) -> PyResult<f64> {
    core::strip2_expected(strat.0).map(|v| v.value).map_err(err)
}

#[pyfunction]
fn strip2_expected_quad(strat: PyStrategy2) -> PyResult<f64> {
    core::strip2_expected_quad(strat.0, &QuadratureSpec::default()).map(|v| v.value).map_err(err)
}

#[pyfunction]
fn strip3_expected(strat: PyStrategy3) -> PyResult<f64> {
    core::strip3_expected(strat.0, &QuadratureSpec::default()).map(|v| v.value).map_err(err)
}

#[pyfunction]
fn disk_expected(strat: PyDiskStrategy) -> PyResult<f64> {
    core::disk_expected(strat.0, &QuadratureSpec::default()).map(|v| v.value).map_err(err)
}

/// Escape length and case label from the start `(x, theta)`.
#[pyfunction]
#[pyo3(signature = (x, theta, strategy))]
fn path_length(x: f64, theta: f64, strategy: &Bound<'_, PyAny>) -> PyResult<(f64, String)> {
    match path_strategy(Some(strategy))? {
        PathStrategy::Strip2(s) => {
            let st = normalize_state(x, theta).map_err(err)?;
            let len = core::strip2_path_length(st, s).map_err(err)?;
            Ok((len, core::classify_strip2(st, s).to_string()))
        }
        PathStrategy::Strip3(s) => {
            let st = normalize_state(x, theta).map_err(err)?;
            let len = core::strip3_path_length(st, s).map_err(err)?;
            Ok((len, core::classify_strip3(st, s).to_string()))
        }
        PathStrategy::Disk2(s) => {
            let st = DiskState::new(x, theta).map_err(err)?;
            let len = core::disk_path_length(st, s).map_err(err)?;
            Ok((len, core::disk_classify(st, s).to_string()))
        }
        PathStrategy::Straight => unreachable!("a strategy object was given"),
    }
}

/// Trace a path with the geometric oracle. Returns a dict with `vertices`,
/// `length` and `escaped`.
#[pyfunction]
#[pyo3(signature = (region, x, theta, strategy=None))]
fn realize<'py>(
    py: Python<'py>,
    region: &str,
    x: f64,
    theta: f64,
    strategy: Option<&Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyDict>> {
    let region = scenario(region)?.region();
    let start = core::Point::new(x, 0.0);
    let r = core::realize(region, start, theta, &path_strategy(strategy)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("vertices", r.vertices.iter().map(|p| (p.x, p.y)).collect::<Vec<_>>())?;
    d.set_item("length", r.total_length)?;
    d.set_item("escaped", r.escaped)?;
    Ok(d)
}

#[pyfunction]
fn optimize_strip2() -> PyOptimizationResult {
    core::solve::optimize_strip2(core::solve::STRIP2_START, &MinimizeOptions::default()).into()
}

#[pyfunction]
#[pyo3(signature = (n_starts=32, seed=7))]
fn optimize_strip3(py: Python<'_>, n_starts: usize, seed: u64) -> PyOptimizationResult {
    py.detach(|| {
        core::solve::optimize_strip3(n_starts, seed, &core::solve::strip3_options(), &QuadratureSpec::default()).into()
    })
}

#[pyfunction]
#[pyo3(signature = (scenario_name, strategy, n, seed, sampling_name="area"))]
fn estimate_mean(
    py: Python<'_>,
    scenario_name: &str,
    strategy: Option<&Bound<'_, PyAny>>,
    n: usize,
    seed: u64,
    sampling_name: &str,
) -> PyResult<PyMcEstimate> {
    let (sc, strat) = (scenario(scenario_name)?, path_strategy(strategy)?);
    let cfg = McConfig { disk_sampling: sampling(sampling_name)?, ..McConfig::new(n, seed) };
    py.detach(|| core::montecarlo::estimate_mean_with(sc, &strat, &cfg)).map(Into::into).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (scenario_name, strategy, n, seed, sampling_name="area"))]
fn estimate_median(
    py: Python<'_>,
    scenario_name: &str,
    strategy: Option<&Bound<'_, PyAny>>,
    n: usize,
    seed: u64,
    sampling_name: &str,
) -> PyResult<PyMcEstimate> {
    let (sc, strat) = (scenario(scenario_name)?, path_strategy(strategy)?);
    let cfg = McConfig { disk_sampling: sampling(sampling_name)?, ..McConfig::new(n, seed) };
    py.detach(|| core::montecarlo::estimate_median_with(sc, &strat, &cfg)).map(Into::into).map_err(err)
}

#[pyfunction]
fn evaluate_zalgaller(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let rep = core::zalgaller::evaluate_zalgaller().map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("r", rep.fit.r)?;
    d.set_item("alpha", rep.fit.alpha)?;
    d.set_item("alpha_deg", rep.alpha_deg)?;
    d.set_item("expected", rep.expected)?;
    d.set_item("expected_at_rounded_params", rep.expected_rounded)?;
    d.set_item("ordering_holds", rep.ordering_holds)?;
    Ok(d)
}

/// Lower bound check for a curve given by `(s, phi)` knots, or for constant
/// curvature when `curvature` is set.
#[pyfunction]
#[pyo3(signature = (knots=None, phi_max=None, curvature=None))]
fn check_lower_bound(
    py: Python<'_>,
    knots: Option<Vec<(f64, f64)>>,
    phi_max: Option<f64>,
    curvature: Option<f64>,
) -> PyResult<Bound<'_, PyDict>> {
    let curve = match (knots, curvature) {
        (Some(k), None) => {
            let bound = phi_max.unwrap_or_else(|| k.iter().map(|p| p.1.abs()).fold(0.0, f64::max));
            TurningCurve::from_knots(k, bound)
        }
        (None, Some(k)) => TurningCurve::constant_curvature(k, phi_max.unwrap_or(1.0)),
        (None, None) => Ok(TurningCurve::straight()),
        (Some(_), Some(_)) => return Err(PyValueError::new_err("give knots or curvature, not both")),
    }
    .map_err(err)?;
    let rep = py.detach(|| core::gevirtz::check_lower_bound(&curve)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("s_star", rep.s_star)?;
    d.set_item("a_gamma", rep.a_gamma)?;
    d.set_item("bound", rep.bound)?;
    d.set_item("slack", rep.slack)?;
    d.set_item("holds", rep.holds)?;
    Ok(d)
}

/// SVG text of figure 2, 4 or 6.
#[pyfunction]
fn figure(n: u32) -> PyResult<String> {
    core::plot::figure(n).map_err(err)
}

/// Run one acceptance criterion; returns `(passed, line)`.
#[pyfunction]
fn run_criterion(py: Python<'_>, id: u32) -> PyResult<(bool, String)> {
    py.detach(|| core::paper_check::run_criterion(id))
        .map(|r| (r.passed, r.line()))
        .ok_or_else(|| PyValueError::new_err(format!("no criterion {id}")))
}

#[pymodule]
fn lost_at_sea_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStrategy2>()?;
    m.add_class::<PyStrategy3>()?;
    m.add_class::<PyDiskStrategy>()?;
    m.add_class::<PyMcEstimate>()?;
    m.add_class::<PyOptimizationResult>()?;
    m.add_function(wrap_pyfunction!(strip2_expected, m)?)?;
    m.add_function(wrap_pyfunction!(strip2_expected_quad, m)?)?;
    m.add_function(wrap_pyfunction!(strip3_expected, m)?)?;
    m.add_function(wrap_pyfunction!(disk_expected, m)?)?;
    m.add_function(wrap_pyfunction!(path_length, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_strip2, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_strip3, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_mean, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_median, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_zalgaller, m)?)?;
    m.add_function(wrap_pyfunction!(check_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    m.add_function(wrap_pyfunction!(run_criterion, m)?)?;
    m.add("STRAIGHT_DISK_MEAN", core::DISK_STRAIGHT_MEAN)?;
    Ok(())
}
