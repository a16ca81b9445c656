//! Python bindings: simulations, fields, sweeps, oscillatory tables and
//! snapshot I/O. Reports come back as plain dictionaries.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use frsg::cli::parse_horizon;
use frsg::dynamics::{ModelParams, NonlinearTerm, State, Variant};
use frsg::error::Error;
use frsg::experiments::{
    energy_sweep as core_energy_sweep, observed_order as core_observed_order, osc_order_table,
    spatial_sweep as core_spatial_sweep, temporal_sweep as core_temporal_sweep, ConvergenceReport, OscTableSpec,
    ReferenceCache, SweepPlan,
};
use frsg::io::snapshot::{read_snapshot as core_read_snapshot, write_snapshot as core_write_snapshot};
use frsg::io::snapshot::{Part, SnapshotMeta, SnapshotQuantity};
use frsg::io::vtk::{export_structured_grid, ExportQuantity};
use frsg::observables::{error_norm as core_error_norm, sobolev_norm, state_energy};
use frsg::scenarios::{make_scenario, ScenarioName};
use frsg::spectral::{Field as CoreField, GridSpec};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } | Error::Snapshot { .. } => PyIOError::new_err(e.to_string()),
        Error::BlowUp { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn report_to_py(py: Python<'_>, report: &ConvergenceReport) -> PyResult<Py<PyAny>> {
    let value = serde_json::to_value(report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

/// A real field sampled on a periodic box, stored row-major.
#[pyclass(name = "Field", module = "frsg", from_py_object)]
#[derive(Clone)]
struct PyField {
    inner: CoreField,
}

#[pymethods]
impl PyField {
    #[new]
    fn new(intervals: Vec<(f64, f64)>, points: Vec<usize>, values: Vec<f64>) -> PyResult<Self> {
        let grid = GridSpec::new(intervals, points).map_err(to_py)?;
        Ok(Self {
            inner: CoreField::from_real(&grid, &values).map_err(to_py)?,
        })
    }

    #[getter]
    fn shape(&self) -> Vec<usize> {
        self.inner.grid().points().to_vec()
    }

    #[getter]
    fn intervals(&self) -> Vec<(f64, f64)> {
        self.inner.grid().intervals().to_vec()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.real_parts()
    }

    fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    /// `H^s` norm, `s` real and non-negative.
    fn sobolev_norm(&self, s: f64) -> PyResult<f64> {
        sobolev_norm(&self.inner, s).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.grid().len()
    }

    fn __repr__(&self) -> String {
        format!("Field(shape={:?}, intervals={:?})", self.shape(), self.intervals())
    }
}

/// One trajectory of a named scenario.
#[pyclass(name = "Simulation", module = "frsg")]
struct PySimulation {
    state: State,
    scenario: ScenarioName,
}

#[pymethods]
impl PySimulation {
    #[new]
    #[pyo3(signature = (scenario, alpha, epsilon, variant = None, points = None, linear = false))]
    fn new(
        scenario: &str,
        alpha: f64,
        epsilon: f64,
        variant: Option<&str>,
        points: Option<Vec<usize>>,
        linear: bool,
    ) -> PyResult<Self> {
        let name: ScenarioName = scenario.parse().map_err(to_py)?;
        let variant = match variant {
            Some(v) => Variant::parse(v).map_err(to_py)?,
            None => name.default_variant(),
        };
        let mut params = ModelParams::new(alpha, epsilon, variant).map_err(to_py)?;
        if linear {
            params = params.with_nonlinearity(NonlinearTerm::Off);
        }
        let (_, u0, u1) = make_scenario(name, points.as_deref()).map_err(to_py)?;
        let state = State::new(params, &u0, &u1).map_err(to_py)?;
        Ok(Self { state, scenario: name })
    }

    /// Take `steps` Strang steps of size `tau`; the GIL is released meanwhile.
    #[pyo3(signature = (tau, steps = 1))]
    fn step(&mut self, py: Python<'_>, tau: f64, steps: usize) -> PyResult<()> {
        let state = &mut self.state;
        py.detach(|| (0..steps).try_for_each(|_| state.step(tau)))
            .map_err(to_py)
    }

    #[getter]
    fn time(&self) -> f64 {
        self.state.time()
    }

    #[getter]
    fn step_index(&self) -> usize {
        self.state.step_index()
    }

    #[getter]
    fn scenario(&self) -> &'static str {
        self.scenario.as_str()
    }

    #[getter]
    fn variant(&self) -> String {
        self.state.params().variant.label()
    }

    /// `(u, ∂_t u)`; for complex variants only the real parts are returned.
    fn fields(&self) -> PyResult<(PyField, PyField)> {
        let (u, v) = self.state.reconstruct_uv().map_err(to_py)?;
        Ok((PyField { inner: u }, PyField { inner: v }))
    }

    fn u(&self) -> PyResult<PyField> {
        Ok(self.fields()?.0)
    }

    /// Discrete energy; real variant only.
    fn energy(&self) -> PyResult<f64> {
        if self.state.params().variant.is_coupled() {
            return Err(PyValueError::new_err("energy is defined for the real variant only"));
        }
        state_energy(&self.state).map_err(to_py)
    }
}

/// `‖a - b‖_{H^s}`, resampling the finer field onto the coarser grid.
#[pyfunction]
fn error_norm(a: &PyField, b: &PyField, s: f64) -> PyResult<f64> {
    core_error_norm(&a.inner, &b.inner, s).map_err(to_py)
}

#[pyfunction]
fn observed_order(e_coarse: f64, e_fine: f64, ratio: f64) -> Option<f64> {
    core_observed_order(e_coarse, e_fine, ratio)
}

#[pyfunction]
fn scenarios() -> Vec<&'static str> {
    ScenarioName::ALL.iter().map(|s| s.as_str()).collect()
}

#[allow(clippy::too_many_arguments)]
fn plan(
    scenario: &str,
    alphas: Vec<f64>,
    epsilons: Vec<f64>,
    taus: Vec<f64>,
    ns: Vec<usize>,
    horizon: &str,
    tau_ref: Option<f64>,
    n_ref: Option<usize>,
) -> PyResult<SweepPlan> {
    let name: ScenarioName = scenario.parse().map_err(to_py)?;
    let mut plan = SweepPlan::new(name, parse_horizon(horizon).map_err(to_py)?);
    plan.alphas = alphas;
    plan.epsilons = epsilons;
    plan.taus = taus;
    plan.ns = ns;
    if let Some(t) = tau_ref {
        plan.reference.tau_ref = t;
    }
    if let Some(n) = n_ref {
        plan.reference.n_ref = n;
    }
    plan.validate().map_err(to_py)?;
    Ok(plan)
}

fn reports(py: Python<'_>, r: frsg::error::Result<Vec<ConvergenceReport>>) -> PyResult<Vec<Py<PyAny>>> {
    r.map_err(to_py)?.iter().map(|rep| report_to_py(py, rep)).collect()
}

/// Time-step sweep; one report dictionary per α.
#[pyfunction]
#[pyo3(signature = (scenario, alphas, epsilons, taus, horizon = "long=1", tau_ref = None, n_ref = None, cache = None))]
#[allow(clippy::too_many_arguments)]
fn temporal_sweep(
    py: Python<'_>,
    scenario: &str,
    alphas: Vec<f64>,
    epsilons: Vec<f64>,
    taus: Vec<f64>,
    horizon: &str,
    tau_ref: Option<f64>,
    n_ref: Option<usize>,
    cache: Option<PathBuf>,
) -> PyResult<Vec<Py<PyAny>>> {
    let plan = plan(scenario, alphas, epsilons, taus, Vec::new(), horizon, tau_ref, n_ref)?;
    let cache = cache.map(ReferenceCache::new);
    let out = py.detach(|| core_temporal_sweep(&plan, cache.as_ref()));
    reports(py, out)
}

/// Grid sweep at `τ_ref`; one report dictionary per α.
#[pyfunction]
#[pyo3(signature = (scenario, alphas, epsilons, ns, horizon = "long=1", tau_ref = None, n_ref = None, cache = None))]
#[allow(clippy::too_many_arguments)]
fn spatial_sweep(
    py: Python<'_>,
    scenario: &str,
    alphas: Vec<f64>,
    epsilons: Vec<f64>,
    ns: Vec<usize>,
    horizon: &str,
    tau_ref: Option<f64>,
    n_ref: Option<usize>,
    cache: Option<PathBuf>,
) -> PyResult<Vec<Py<PyAny>>> {
    let plan = plan(scenario, alphas, epsilons, Vec::new(), ns, horizon, tau_ref, n_ref)?;
    let cache = cache.map(ReferenceCache::new);
    let out = py.detach(|| core_spatial_sweep(&plan, cache.as_ref()));
    reports(py, out)
}

/// Maximum energy drift per `(ε, τ)`, with histories sampled every `every` steps.
#[pyfunction]
#[pyo3(signature = (scenario, alphas, epsilons, taus, horizon = "long=1", n = None, every = 1))]
#[allow(clippy::too_many_arguments)]
fn energy_sweep(
    py: Python<'_>,
    scenario: &str,
    alphas: Vec<f64>,
    epsilons: Vec<f64>,
    taus: Vec<f64>,
    horizon: &str,
    n: Option<usize>,
    every: usize,
) -> PyResult<Vec<Py<PyAny>>> {
    let plan = plan(scenario, alphas, epsilons, taus, Vec::new(), horizon, None, n)?;
    let out = py.detach(|| core_energy_sweep(&plan, every));
    reports(py, out)
}

/// Error/order table of the oscillatory complex model. Defaults are the
/// desk-scale settings.
#[pyfunction]
#[pyo3(signature = (alpha = 2.0, lambda0 = None, depth = None, eps_depth = None, p = None, n = None, lambda_ref = None, cache = None))]
#[allow(clippy::too_many_arguments)]
fn osc_table(
    py: Python<'_>,
    alpha: f64,
    lambda0: Option<f64>,
    depth: Option<usize>,
    eps_depth: Option<usize>,
    p: Option<u32>,
    n: Option<usize>,
    lambda_ref: Option<f64>,
    cache: Option<PathBuf>,
) -> PyResult<Py<PyAny>> {
    let mut spec = OscTableSpec::desk(alpha);
    spec.lambda0 = lambda0.unwrap_or(spec.lambda0);
    spec.depth = depth.unwrap_or(spec.depth);
    spec.epsilon_depth = eps_depth.unwrap_or(spec.epsilon_depth);
    spec.p = p.unwrap_or(spec.p);
    spec.n = n.unwrap_or(spec.n);
    spec.lambda_ref = lambda_ref.unwrap_or(spec.lambda_ref);
    let cache = cache.map(ReferenceCache::new);
    let report = py.detach(|| osc_order_table(&spec, cache.as_ref())).map_err(to_py)?;
    report_to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (path, field, alpha, epsilon, time, quantity = "u"))]
fn write_snapshot(path: PathBuf, field: &PyField, alpha: f64, epsilon: f64, time: f64, quantity: &str) -> PyResult<()> {
    let field_kind = match quantity {
        "u" => SnapshotQuantity::U,
        "v" => SnapshotQuantity::V,
        other => return Err(PyValueError::new_err(format!("quantity must be u or v, got {other:?}"))),
    };
    let meta = SnapshotMeta {
        alpha,
        epsilon,
        time,
        field: field_kind,
        part: Part::Re,
    };
    core_write_snapshot(&path, &field.inner, &meta).map_err(to_py)
}

/// `(field, header)` of a snapshot file.
#[pyfunction]
fn read_snapshot(py: Python<'_>, path: PathBuf) -> PyResult<(PyField, Py<PyAny>)> {
    let (field, header) = core_read_snapshot(&path).map_err(to_py)?;
    let header = serde_json::to_value(&header).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((PyField { inner: field }, json_to_py(py, &header)?))
}

/// Convert a snapshot to a legacy structured-points file of `u` or `sin(u/2)`.
#[pyfunction]
#[pyo3(signature = (snapshot, out, quantity = "u"))]
fn export_vtk(snapshot: PathBuf, out: PathBuf, quantity: &str) -> PyResult<()> {
    let q: ExportQuantity = quantity.parse().map_err(to_py)?;
    export_structured_grid(&snapshot, &out, q).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "frsg")]
fn frsg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PySimulation>()?;
    m.add_function(wrap_pyfunction!(error_norm, m)?)?;
    m.add_function(wrap_pyfunction!(observed_order, m)?)?;
    m.add_function(wrap_pyfunction!(scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(temporal_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(spatial_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(energy_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(osc_table, m)?)?;
    m.add_function(wrap_pyfunction!(write_snapshot, m)?)?;
    m.add_function(wrap_pyfunction!(read_snapshot, m)?)?;
    m.add_function(wrap_pyfunction!(export_vtk, m)?)?;
    let d = PyDict::new(m.py());
    d.set_item("version", env!("CARGO_PKG_VERSION"))?;
    m.add("build_info", d)?;
    Ok(())
}
