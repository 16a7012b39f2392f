use clap::ValueEnum;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fiberband_core::cli::{run_command, Command, RunConfig};
use fiberband_core::fiber::SolverOptions;
use fiberband_core::scattering::{self, ScatteringOptions};
use fiberband_core::spectral::{self, SliceOptions};
use fiberband_core::{semiclassical, CoreModel, Error, FieldProfile};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidProfile(_)
        | Error::InvalidGrid(_)
        | Error::OutOfRange { .. }
        | Error::OutsideFluxRange { .. }
        | Error::NotEmbedded { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn slice_options(h: f64) -> SliceOptions {
    SliceOptions {
        h,
        ..Default::default()
    }
}

/// A magnetic field profile `b(x)` with its vector potential.
#[pyclass(name = "Profile", frozen)]
struct PyProfile {
    inner: FieldProfile,
}

#[pymethods]
impl PyProfile {
    #[staticmethod]
    fn constant(b0: f64) -> PyResult<Self> {
        if !(b0 > 0.0 && b0.is_finite()) {
            return Err(PyValueError::new_err("b0 must be positive"));
        }
        Ok(Self {
            inner: FieldProfile::constant(b0),
        })
    }

    #[staticmethod]
    fn gaussian() -> Self {
        Self {
            inner: FieldProfile::gaussian(),
        }
    }

    /// `core` is one of "pure", "smooth", "half_line".
    #[staticmethod]
    #[pyo3(signature = (c1, alpha, core = "pure"))]
    fn power_law(c1: f64, alpha: f64, core: &str) -> PyResult<Self> {
        let core = match core {
            "pure" => CoreModel::Pure,
            "smooth" => CoreModel::Smooth,
            "half_line" => CoreModel::HalfLine,
            other => return Err(PyValueError::new_err(format!("unknown core model {other:?}"))),
        };
        let inner = FieldProfile::power_law(c1, alpha, core).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn step_like(b_minus: f64, b_plus: f64, width: f64) -> PyResult<Self> {
        let inner = FieldProfile::step_like(b_minus, b_plus, width).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn tabulated(grid: Vec<f64>, values: Vec<f64>) -> PyResult<Self> {
        let inner = FieldProfile::tabulated(grid, values).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn b(&self, x: f64) -> PyResult<f64> {
        self.inner.eval_b(x).map_err(to_py)
    }

    fn a(&self, x: f64) -> PyResult<f64> {
        self.inner.eval_a(x).map_err(to_py)
    }

    /// Bottom of the essential spectrum of the fiber at `xi` (may be `inf`).
    fn ess_threshold(&self, xi: f64) -> f64 {
        spectral::ess_threshold(&self.inner, xi).to_f64()
    }

    fn __repr__(&self) -> String {
        format!("Profile({:?})", self.inner.kind())
    }
}

/// Eigenvalues below the threshold and their error estimates.
#[pyfunction]
#[pyo3(signature = (profile, xi, k_max = 10, h = 1.0))]
fn spectrum_slice(
    py: Python<'_>,
    profile: &PyProfile,
    xi: f64,
    k_max: usize,
    h: f64,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let s = py
        .detach(|| spectral::spectrum_slice(&profile.inner, xi, k_max, &slice_options(h)))
        .map_err(to_py)?;
    Ok((s.eigenvalues, s.errors))
}

/// Uniform sweep; returns the xi grid and one list per band (`None` where absent).
#[pyfunction]
#[pyo3(signature = (profile, xi_min, xi_max, samples, k_max = 5, h = 1.0))]
#[allow(clippy::type_complexity)]
fn sweep_bands(
    py: Python<'_>,
    profile: &PyProfile,
    xi_min: f64,
    xi_max: f64,
    samples: usize,
    k_max: usize,
    h: f64,
) -> PyResult<(Vec<f64>, Vec<Vec<Option<f64>>>)> {
    let d = py
        .detach(|| spectral::sweep_bands(&profile.inner, xi_min, xi_max, samples, k_max, &slice_options(h)))
        .map_err(to_py)?;
    let bands = (1..=k_max).map(|n| d.band(n)).collect();
    Ok((d.xi_grid(), bands))
}

#[pyfunction]
#[pyo3(signature = (profile, xi, n, h = 1.0))]
fn band_derivative(profile: &PyProfile, xi: f64, n: usize, h: f64) -> PyResult<f64> {
    spectral::band_derivative(&profile.inner, xi, n, &slice_options(h)).map_err(to_py)
}

#[pyfunction]
fn harmonic_levels(profile: &PyProfile, theta: f64, h: f64, n_max: usize) -> PyResult<Vec<f64>> {
    semiclassical::harmonic_levels(&profile.inner, theta, h, n_max).map_err(to_py)
}

#[pyfunction]
fn counting_check<'py>(
    py: Python<'py>,
    profile: &PyProfile,
    theta: f64,
    h: f64,
    eta: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let c = semiclassical::counting_check(&profile.inner, theta, h, eta, None, &SolverOptions::default())
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("n_computed", c.n_computed)?;
    d.set_item("bound", c.bound)?;
    d.set_item("v_plus", c.v_plus)?;
    d.set_item("pass", c.pass)?;
    d.set_item("vacuous", c.vacuous)?;
    d.set_item("outside_regime", c.outside_regime)?;
    Ok(d)
}

/// Checks that an embedded `lam` is not an eigenvalue of the fiber at `xi`.
#[pyfunction]
fn embedded_exclusion<'py>(
    py: Python<'py>,
    profile: &PyProfile,
    xi: f64,
    lam: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = scattering::embedded_exclusion(&profile.inner, xi, lam, &ScatteringOptions::default())
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("excluded", r.excluded)?;
    d.set_item("side", r.side.to_string())?;
    d.set_item("omega", r.omega)?;
    d.set_item("amplitude", r.amplitude)?;
    d.set_item("threshold", r.threshold)?;
    d.set_item("horizon", r.horizon)?;
    Ok(d)
}

/// Runs a CLI command on a TOML config string and returns the JSON report.
#[pyfunction]
fn run(py: Python<'_>, command: &str, config: &str) -> PyResult<String> {
    let cmd = Command::from_str(command, true).map_err(PyValueError::new_err)?;
    let cfg = RunConfig::from_toml(config).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = py
        .detach(|| run_command(cmd, &cfg))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    report
        .to_json()
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn fiberband(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(spectrum_slice, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_bands, m)?)?;
    m.add_function(wrap_pyfunction!(band_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_levels, m)?)?;
    m.add_function(wrap_pyfunction!(counting_check, m)?)?;
    m.add_function(wrap_pyfunction!(embedded_exclusion, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
