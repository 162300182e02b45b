//! Python bindings: the drive parameters, eigensystem, quantum-geometry and
//! Chern-number routes, monopole fields, and the ramp protocol, exposed with
//! plain-Python types (lists, tuples, complex).

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use wuyang_core::dynamics as dyn_;
use wuyang_core::geometry;
use wuyang_core::monopole;
use wuyang_core::qubit;
use wuyang_core::topology;
use wuyang_core::Error;

fn pyerr(e: Error) -> PyErr {
    if e.is_usage() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn parse_band(band: &str) -> PyResult<qubit::Band> {
    band.parse().map_err(pyerr)
}

fn point(theta: f64, phi: f64) -> PyResult<qubit::SpherePoint> {
    qubit::SpherePoint::wrapped(theta, phi).map_err(pyerr)
}

/// Drive parameters Δ₁, Δ₂, Ωₙ in rad/µs.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct DriveParams {
    inner: qubit::DriveParams,
}

#[pymethods]
impl DriveParams {
    #[new]
    fn new(delta1: f64, delta2: f64, omega_n: f64) -> PyResult<Self> {
        Ok(Self {
            inner: qubit::DriveParams::new(delta1, delta2, omega_n).map_err(pyerr)?,
        })
    }

    /// Build from plain MHz values (multiplied by 2π).
    #[staticmethod]
    fn from_mhz(delta1_mhz: f64, delta2_mhz: f64, omega_mhz: f64) -> PyResult<Self> {
        Ok(Self {
            inner: qubit::DriveParams::from_mhz(delta1_mhz, delta2_mhz, omega_mhz)
                .map_err(pyerr)?,
        })
    }

    #[getter]
    fn delta1(&self) -> f64 {
        self.inner.delta1
    }

    #[getter]
    fn delta2(&self) -> f64 {
        self.inner.delta2
    }

    #[getter]
    fn omega_n(&self) -> f64 {
        self.inner.omega_n
    }

    fn detuning_ratio(&self) -> f64 {
        self.inner.detuning_ratio()
    }

    fn __repr__(&self) -> String {
        format!(
            "DriveParams(delta1={}, delta2={}, omega_n={})",
            self.inner.delta1, self.inner.delta2, self.inner.omega_n
        )
    }
}

/// A computed first Chern number.
#[pyclass(frozen)]
struct ChernNumber {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    rounded: i64,
    #[pyo3(get)]
    residual: f64,
    #[pyo3(get)]
    route: String,
    #[pyo3(get)]
    note: Option<String>,
}

impl From<topology::ChernResult> for ChernNumber {
    fn from(c: topology::ChernResult) -> Self {
        Self {
            value: c.value,
            rounded: c.rounded,
            residual: c.residual,
            route: c.route.label().to_string(),
            note: c.note,
        }
    }
}

#[pymethods]
impl ChernNumber {
    fn __repr__(&self) -> String {
        format!(
            "ChernNumber(value={}, rounded={}, route='{}')",
            self.value, self.rounded, self.route
        )
    }
}

/// Hamiltonian matrix at (θ, φ) as a nested list of complex entries.
#[pyfunction]
fn build_hamiltonian(
    params: &DriveParams,
    theta: f64,
    phi: f64,
) -> PyResult<Vec<Vec<Complex64>>> {
    let h = qubit::build_hamiltonian(&params.inner, &point(theta, phi)?);
    Ok(vec![
        vec![h.entry(0, 0), h.entry(0, 1)],
        vec![h.entry(1, 0), h.entry(1, 1)],
    ])
}

type PyEigenSystem = ((f64, f64), (Vec<Complex64>, Vec<Complex64>));

/// `(energies, states)` sorted ascending, gauge-fixed; states are 2-lists.
#[pyfunction]
fn eigensystem(params: &DriveParams, theta: f64, phi: f64) -> PyResult<PyEigenSystem> {
    let h = qubit::build_hamiltonian(&params.inner, &point(theta, phi)?);
    let es = qubit::eigensystem(&h).map_err(pyerr)?;
    Ok((
        (es.e_ground, es.e_excited),
        (
            vec![es.psi_ground.a0, es.psi_ground.a1],
            vec![es.psi_excited.a0, es.psi_excited.a1],
        ),
    ))
}

/// Berry curvature F_θφ by the `spectral` or finite-difference `qgt` route.
#[pyfunction]
#[pyo3(signature = (params, theta, phi, band = "ground", route = "spectral"))]
fn berry_curvature(
    params: &DriveParams,
    theta: f64,
    phi: f64,
    band: &str,
    route: &str,
) -> PyResult<f64> {
    let band = parse_band(band)?;
    let p = point(theta, phi)?;
    match route {
        "spectral" => geometry::berry_curvature_spectral(&params.inner, &p, band).map_err(pyerr),
        "qgt" => {
            let map = geometry::StateMap::band(band, params.inner);
            let q = geometry::qgt_finite_difference(&map, &p, geometry::STATE_STEP)
                .map_err(pyerr)?;
            Ok(geometry::berry_curvature_qgt(&q))
        }
        other => Err(PyValueError::new_err(format!(
            "unknown route '{other}' (expected spectral|qgt)"
        ))),
    }
}

/// Fubini-Study metric components (E, F, G) of a band map at θ.
#[pyfunction]
#[pyo3(signature = (params, theta, band = "ground"))]
fn fubini_study_metric(params: &DriveParams, theta: f64, band: &str) -> PyResult<(f64, f64, f64)> {
    let map = geometry::StateMap::band(parse_band(band)?, params.inner);
    let q = geometry::qgt_analytic(&map, &point(theta, 0.0)?).map_err(pyerr)?;
    let m = geometry::fubini_study_metric(&q);
    Ok((m.e, m.f, m.g))
}

/// First Chern number by `plaquette`, `spectral` or `dynamical` route.
#[pyfunction]
#[pyo3(signature = (params, band = "ground", route = "plaquette", grid = (48, 48), t_ramp = 1.0))]
fn chern(
    params: &DriveParams,
    band: &str,
    route: &str,
    grid: (usize, usize),
    t_ramp: f64,
) -> PyResult<ChernNumber> {
    let band = parse_band(band)?;
    let result = match route.parse::<topology::ChernRoute>().map_err(pyerr)? {
        topology::ChernRoute::Plaquette => topology::chern_plaquette(&params.inner, band, grid),
        topology::ChernRoute::SpectralQuadrature => {
            topology::chern_spectral_quadrature(&params.inner, band, grid)
        }
        topology::ChernRoute::Dynamical => dyn_::RampProtocol::new(params.inner, t_ramp, band)
            .and_then(|p| dyn_::dynamical_chern(&p)),
        topology::ChernRoute::TwoPatch => Err(Error::InvalidInput(
            "use wu_yang_chern for the two-patch route".into(),
        )),
    };
    Ok(result.map_err(pyerr)?.into())
}

/// Two-patch Chern number of a monopole of charge g at radius r.
#[pyfunction]
#[pyo3(signature = (g, r = 1.0, n_phi = 64))]
fn wu_yang_chern(g: f64, r: f64, n_phi: usize) -> PyResult<ChernNumber> {
    Ok(topology::wu_yang_chern(g, r, n_phi).map_err(pyerr)?.into())
}

/// Wilson-loop Berry phase of a band map around the constant-θ circle.
#[pyfunction]
#[pyo3(signature = (params, theta, band = "ground", n_phi = 256))]
fn berry_phase_loop(params: &DriveParams, theta: f64, band: &str, n_phi: usize) -> PyResult<f64> {
    let map = geometry::StateMap::band(parse_band(band)?, params.inner);
    topology::berry_phase_loop(&map, theta, n_phi).map_err(pyerr)
}

/// Monopole flux `∮ B·dS = 4πg` through the sphere of radius r.
#[pyfunction]
#[pyo3(signature = (g, r = 1.0, grid = (32, 32)))]
fn monopole_flux(g: f64, r: f64, grid: (usize, usize)) -> PyResult<f64> {
    monopole::monopole_flux(&monopole::MonopoleConfig { g_charge: g }, r, grid).map_err(pyerr)
}

/// Gauss-Bonnet assembly on the sphere section:
/// `(bulk, boundary, euler_estimate)`.
#[pyfunction]
#[pyo3(signature = (theta_cap_over_pi = 1.0, grid = (128, 128)))]
fn gauss_bonnet(theta_cap_over_pi: f64, grid: (usize, usize)) -> PyResult<(f64, f64, f64)> {
    let check = geometry::gauss_bonnet_check(
        &geometry::StateMap::SphereSection,
        theta_cap_over_pi * std::f64::consts::PI,
        grid,
    )
    .map_err(pyerr)?;
    Ok((check.bulk, check.boundary, check.euler_estimate))
}

/// Ramp the drive and return `{t, theta, sigma_y, f_theta_phi, velocity}`
/// downsampled to at most `samples` points.
#[pyfunction]
#[pyo3(signature = (params, t_ramp, band = "ground", samples = 1001))]
fn quench(
    py: Python<'_>,
    params: &DriveParams,
    t_ramp: f64,
    band: &str,
    samples: usize,
) -> PyResult<Py<pyo3::types::PyDict>> {
    if samples < 2 {
        return Err(PyValueError::new_err("samples must be >= 2"));
    }
    let protocol = dyn_::RampProtocol::new(params.inner, t_ramp, parse_band(band)?).map_err(pyerr)?;
    let traj = dyn_::evolve(&protocol).map_err(pyerr)?;
    let q = dyn_::extract_curvature(&traj, &protocol).map_err(pyerr)?;
    let n = traj.len();
    let take = samples.min(n);
    let pick = |v: &[f64]| -> Vec<f64> {
        (0..take).map(|s| v[(s * (n - 1)) / (take - 1)]).collect()
    };
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("t", pick(&traj.times))?;
    dict.set_item("theta", pick(&traj.theta_values))?;
    dict.set_item("sigma_y", pick(&traj.sigma_y_expect))?;
    dict.set_item("f_theta_phi", pick(&q.f_theta_phi))?;
    dict.set_item("velocity", q.quench_velocity)?;
    Ok(dict.into())
}

/// Fidelity of the ramped state at θ_meas to a target
/// (`bare_g`, `bare_e` or `degenerate_s`).
#[pyfunction]
#[pyo3(signature = (params, t_ramp, theta_meas = std::f64::consts::PI, band = "ground", target = "bare_e"))]
fn ramp_fidelity(
    params: &DriveParams,
    t_ramp: f64,
    theta_meas: f64,
    band: &str,
    target: &str,
) -> PyResult<f64> {
    let target: dyn_::FidelityTarget = target.parse().map_err(pyerr)?;
    let protocol = dyn_::RampProtocol::new(params.inner, t_ramp, parse_band(band)?).map_err(pyerr)?;
    let t_meas = theta_meas / std::f64::consts::PI * t_ramp;
    let states = dyn_::propagate_sampled(&protocol, &[t_meas]).map_err(pyerr)?;
    Ok(target.state().fidelity(&states[0]))
}

/// `(ratios, chern_values)` of the topological transition sweep.
#[pyfunction]
#[pyo3(signature = (params, ratios, band = "ground", route = "plaquette", grid = (48, 48), t_ramp = 1.0))]
fn transition_curve(
    params: &DriveParams,
    ratios: Vec<f64>,
    band: &str,
    route: &str,
    grid: (usize, usize),
    t_ramp: f64,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let settings = topology::SweepSettings {
        grid,
        t_ramp,
        dt: None,
    };
    let curve = topology::transition_sweep(
        &params.inner,
        &ratios,
        parse_band(band)?,
        route.parse().map_err(pyerr)?,
        &settings,
    )
    .map_err(pyerr)?;
    Ok(curve
        .points
        .iter()
        .map(|p| (p.ratio, p.chern))
        .unzip())
}

#[pymodule]
fn wuyang_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<DriveParams>()?;
    m.add_class::<ChernNumber>()?;
    m.add_function(wrap_pyfunction!(build_hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(eigensystem, m)?)?;
    m.add_function(wrap_pyfunction!(berry_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(fubini_study_metric, m)?)?;
    m.add_function(wrap_pyfunction!(chern, m)?)?;
    m.add_function(wrap_pyfunction!(wu_yang_chern, m)?)?;
    m.add_function(wrap_pyfunction!(berry_phase_loop, m)?)?;
    m.add_function(wrap_pyfunction!(monopole_flux, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_bonnet, m)?)?;
    m.add_function(wrap_pyfunction!(quench, m)?)?;
    m.add_function(wrap_pyfunction!(ramp_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(transition_curve, m)?)?;
    Ok(())
}
