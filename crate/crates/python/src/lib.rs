//! Python bindings for the `flavorsim` solvers.
//!
//! Functions take plain numbers and return [`Trajectory`] objects or plain
//! dicts. JSON-shaped reports come back as dicts parsed by Python's `json`.

use std::collections::BTreeMap;

use ::flavorsim as core;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(err: core::Error) -> PyErr {
    if err.is_solver_failure() {
        PyRuntimeError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

fn json_to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(name = "TimeGrid", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct TimeGrid(core::TimeGrid);

#[pymethods]
impl TimeGrid {
    #[new]
    fn new(t_start: f64, t_end: f64, dt: f64) -> PyResult<Self> {
        core::TimeGrid::new(t_start, t_end, dt).map(TimeGrid).map_err(to_py)
    }

    /// Grid on `[0, horizon]`.
    #[staticmethod]
    fn horizon(horizon: f64, dt: f64) -> PyResult<Self> {
        core::TimeGrid::horizon(horizon, dt).map(TimeGrid).map_err(to_py)
    }

    #[getter]
    fn t_start(&self) -> f64 {
        self.0.t_start()
    }

    #[getter]
    fn t_end(&self) -> f64 {
        self.0.t_end()
    }

    #[getter]
    fn dt(&self) -> f64 {
        self.0.dt()
    }

    fn times(&self) -> Vec<f64> {
        self.0.times()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "TimeGrid(t_start={}, t_end={}, dt={})",
            self.0.t_start(),
            self.0.t_end(),
            self.0.dt()
        )
    }
}

#[pyclass(name = "Trajectory", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Trajectory(core::Trajectory);

#[pymethods]
impl Trajectory {
    #[getter]
    fn times(&self) -> Vec<f64> {
        self.0.times().to_vec()
    }

    #[getter]
    fn zeta(&self) -> Vec<f64> {
        self.0.zeta().to_vec()
    }

    /// Audit channels by name.
    #[getter]
    fn audits(&self) -> BTreeMap<String, Vec<f64>> {
        self.0
            .audits()
            .iter()
            .map(|a| (a.name.clone(), a.values.clone()))
            .collect()
    }

    fn first_zero_crossing(&self) -> Option<f64> {
        core::first_zero_crossing(&self.0)
    }

    fn min_zeta(&self) -> f64 {
        self.0.min_zeta()
    }

    fn decimated(&self, stride: usize) -> Self {
        Trajectory(self.0.decimated(stride))
    }

    fn to_csv(&self) -> String {
        core::cli::trajectory_csv(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Trajectory(len={}, t_end={}, audits={:?})",
            self.0.len(),
            self.0.times().last().copied().unwrap_or(0.0),
            self.0.audits().iter().map(|a| a.name.as_str()).collect::<Vec<_>>()
        )
    }
}

#[pyclass(name = "ScalingFit", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct ScalingFit(core::ScalingFit);

#[pymethods]
impl ScalingFit {
    #[getter]
    fn slope(&self) -> f64 {
        self.0.slope
    }

    #[getter]
    fn intercept(&self) -> f64 {
        self.0.intercept
    }

    #[getter]
    fn r_squared(&self) -> f64 {
        self.0.r_squared
    }

    fn __repr__(&self) -> String {
        format!(
            "ScalingFit(slope={}, intercept={}, r_squared={})",
            self.0.slope, self.0.intercept, self.0.r_squared
        )
    }
}

#[pyclass(name = "StabilityReport", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct StabilityReport(core::stability::StabilityReport);

#[pymethods]
impl StabilityReport {
    #[getter]
    fn lambda_(&self) -> f64 {
        self.0.lambda
    }

    #[getter]
    fn eigenvalues(&self) -> (Complex64, Complex64) {
        (self.0.eigenvalues[0], self.0.eigenvalues[1])
    }

    #[getter]
    fn growth_rate(&self) -> f64 {
        self.0.growth_rate
    }

    /// One of `"unstable"`, `"marginal"`, `"stable"`.
    #[getter]
    fn classification(&self) -> &'static str {
        use core::stability::Classification::*;
        match self.0.classification {
            Unstable => "unstable",
            Marginal => "marginal",
            Stable => "stable",
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "StabilityReport(lambda={}, growth_rate={}, classification={})",
            self.0.lambda,
            self.0.growth_rate,
            self.classification()
        )
    }
}

fn grid(horizon: f64, dt: f64) -> PyResult<core::TimeGrid> {
    core::TimeGrid::horizon(horizon, dt).map_err(to_py)
}

/// Seeded classical beams; `seed` is the initial mixing angle.
#[pyfunction]
#[pyo3(signature = (seed, seed_b=None, n_a=1.0, n_b=1.0, horizon=25.0, dt=1e-3))]
fn run_seeded(
    seed: f64,
    seed_b: Option<f64>,
    n_a: f64,
    n_b: f64,
    horizon: f64,
    dt: f64,
) -> PyResult<Trajectory> {
    let beams = core::seeded::BeamPair::new(n_a, n_b, seed, seed_b.unwrap_or(seed)).map_err(to_py)?;
    core::seeded::run_seeded(&beams, &grid(horizon, dt)?)
        .map(Trajectory)
        .map_err(to_py)
}

/// Exact evolution of the (N+1)-state ladder from all gravitons.
#[pyfunction]
#[pyo3(signature = (n, lam=0.0, horizon=10.0, dt=1e-2))]
fn evolve_ladder(py: Python<'_>, n: usize, lam: f64, horizon: f64, dt: f64) -> PyResult<Trajectory> {
    let g = grid(horizon, dt)?;
    py.detach(|| {
        let h = core::quantum::build_ladder(n, lam)?;
        core::quantum::evolve_ladder(&h, &g)
    })
    .map(Trajectory)
    .map_err(to_py)
}

type BreakTimes = Vec<(usize, Option<f64>)>;

/// First crossing for each N and the fit of crossing time against ln N.
#[pyfunction]
#[pyo3(signature = (ns, lam=0.0, horizon=8.0, dt=1e-2))]
fn break_time_scan(
    py: Python<'_>,
    ns: Vec<usize>,
    lam: f64,
    horizon: f64,
    dt: f64,
) -> PyResult<(BreakTimes, Option<ScalingFit>)> {
    let g = grid(horizon, dt)?;
    let scan = py
        .detach(|| core::quantum::break_time_scan(&ns, lam, &g))
        .map_err(to_py)?;
    Ok((scan.points, scan.fit.map(ScalingFit)))
}

/// Single-mode mean-field run; `seed` is in units of the quantum fluctuation.
#[pyfunction]
#[pyo3(signature = (n, seed=Complex64::new(1.0, 0.0), lam=0.0, horizon=10.0, dt=1e-3))]
fn run_single_mode(
    py: Python<'_>,
    n: f64,
    seed: Complex64,
    lam: f64,
    horizon: f64,
    dt: f64,
) -> PyResult<Trajectory> {
    let g = grid(horizon, dt)?;
    py.detach(|| core::meanfield::run_single_mode(n, seed, lam, &g))
        .map(Trajectory)
        .map_err(to_py)
}

/// Clashing beams against isotropic clouds. Returns a dict with both
/// trajectories and the break-time ratio.
#[pyfunction]
#[pyo3(signature = (n=512.0, m=64, seed=1.0, horizon=60.0, dt=5e-3, random=false, rng_seed=0))]
#[allow(clippy::too_many_arguments)]
fn beam_vs_isotropic(
    py: Python<'_>,
    n: f64,
    m: usize,
    seed: f64,
    horizon: f64,
    dt: f64,
    random: bool,
    rng_seed: u64,
) -> PyResult<Py<PyAny>> {
    let g = grid(horizon, dt)?;
    let sampling = if random {
        core::meanfield::Sampling::Random
    } else {
        core::meanfield::Sampling::Fibonacci
    };
    let report = py
        .detach(|| {
            core::meanfield::beam_vs_isotropic_report(
                n,
                m,
                Complex64::new(seed, 0.0),
                &g,
                sampling,
                rng_seed,
            )
        })
        .map_err(to_py)?;
    let out = json_to_py(py, &report)?;
    let dict = out.bind(py);
    dict.set_item("beams", Trajectory(report.beams))?;
    dict.set_item("isotropic", Trajectory(report.isotropic))?;
    Ok(out)
}

#[pyfunction]
fn analyze_lambda(lam: f64) -> PyResult<StabilityReport> {
    core::stability::analyze_lambda(lam)
        .map(StabilityReport)
        .map_err(to_py)
}

/// Measured growth rate, or `None` when the seed never grows through the fit window.
#[pyfunction]
#[pyo3(signature = (lam, seed=Complex64::new(1e-7, 0.0), horizon=60.0, dt=1e-3))]
fn growth_rate_empirical(lam: f64, seed: Complex64, horizon: f64, dt: f64) -> PyResult<Option<f64>> {
    core::stability::growth_rate_empirical(lam, seed, horizon, dt)
        .map(|m| m.rate)
        .map_err(to_py)
}

/// Graviton number density in MeV³ for a merger.
#[pyfunction]
#[pyo3(signature = (luminosity_erg_per_s=3.6e56, frequency_hz=250.0))]
fn graviton_density(luminosity_erg_per_s: f64, frequency_hz: f64) -> PyResult<f64> {
    let scenario = core::astro::MergerScenario::new(luminosity_erg_per_s, frequency_hz).map_err(to_py)?;
    core::astro::graviton_density(&scenario, &Default::default())
        .map(|e| e.value.value)
        .map_err(to_py)
}

/// ξ = 8πG n T for a density in MeV³ and a duration in MeV⁻¹.
#[pyfunction]
fn xi_figure_of_merit(density_mev3: f64, duration_inv_mev: f64) -> PyResult<f64> {
    use core::astro::{Quantity, Unit};
    core::astro::xi_figure_of_merit(
        Quantity::new(density_mev3, Unit::DENSITY),
        Quantity::new(duration_inv_mev, Unit::INV_MEV),
        &Default::default(),
    )
    .map(|x| x.xi)
    .map_err(to_py)
}

/// Photon density (MeV³) above which photon refraction blocks conversion.
#[pyfunction]
fn blocking_threshold(graviton_density_mev3: f64, photon_energy_mev: f64) -> PyResult<f64> {
    use core::astro::{Quantity, Unit};
    core::astro::blocking_threshold(
        Quantity::new(graviton_density_mev3, Unit::DENSITY),
        Quantity::new(photon_energy_mev, Unit::MEV),
        &Default::default(),
    )
    .map(|b| b.threshold.value)
    .map_err(to_py)
}

/// `(ratio, log10 ratio)` of incoherent to coherent conversion time.
#[pyfunction]
fn incoherent_comparison(frequency_hz: f64) -> PyResult<(f64, f64)> {
    core::astro::incoherent_comparison(frequency_hz, &Default::default())
        .map(|r| (r.ratio, r.exponent))
        .map_err(to_py)
}

/// Full feasibility report with provenance, as a dict.
#[pyfunction]
#[pyo3(signature = (luminosity_erg_per_s=3.6e56, frequency_hz=250.0))]
fn feasibility_report(py: Python<'_>, luminosity_erg_per_s: f64, frequency_hz: f64) -> PyResult<Py<PyAny>> {
    let scenario = core::astro::MergerScenario::new(luminosity_erg_per_s, frequency_hz).map_err(to_py)?;
    let report = core::astro::feasibility_report(&scenario, &Default::default()).map_err(to_py)?;
    json_to_py(py, &report)
}

#[pyfunction]
fn fit_log_scaling(points: Vec<(f64, f64)>) -> PyResult<ScalingFit> {
    core::fit_log_scaling(&points).map(ScalingFit).map_err(to_py)
}

#[pyfunction]
fn first_zero_crossing(times: Vec<f64>, zeta: Vec<f64>) -> Option<f64> {
    core::numerics::zero_crossing(&times, &zeta)
}

#[pymodule]
#[pyo3(name = "flavorsim")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<TimeGrid>()?;
    m.add_class::<Trajectory>()?;
    m.add_class::<ScalingFit>()?;
    m.add_class::<StabilityReport>()?;
    m.add_function(wrap_pyfunction!(run_seeded, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_ladder, m)?)?;
    m.add_function(wrap_pyfunction!(break_time_scan, m)?)?;
    m.add_function(wrap_pyfunction!(run_single_mode, m)?)?;
    m.add_function(wrap_pyfunction!(beam_vs_isotropic, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(growth_rate_empirical, m)?)?;
    m.add_function(wrap_pyfunction!(graviton_density, m)?)?;
    m.add_function(wrap_pyfunction!(xi_figure_of_merit, m)?)?;
    m.add_function(wrap_pyfunction!(blocking_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(incoherent_comparison, m)?)?;
    m.add_function(wrap_pyfunction!(feasibility_report, m)?)?;
    m.add_function(wrap_pyfunction!(fit_log_scaling, m)?)?;
    m.add_function(wrap_pyfunction!(first_zero_crossing, m)?)?;
    Ok(())
}
