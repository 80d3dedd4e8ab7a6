//! Python bindings. Structured results come back as plain dicts and lists.

use std::sync::Arc;

use bosegas_core::bogoliubov::{self, BogParams, DispersionTable};
use bosegas_core::fock::{self, Sector, DEFAULT_DIM_LIMIT};
use bosegas_core::neumann_box::{kernel_diagonality, ModeLattice, NeumannMode, SymmetrizedKernel};
use bosegas_core::scattering::{self, GridSpec};
use bosegas_core::{thermo, verify, Error};
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

#[pyclass(name = "RadialPotential", frozen)]
struct PyPotential(scattering::RadialPotential);

#[pymethods]
impl PyPotential {
    #[staticmethod]
    fn barrier(v0: f64, radius: f64) -> PyResult<Self> {
        scattering::RadialPotential::barrier(v0, radius).map(Self).map_err(err)
    }

    /// Piecewise-linear potential through (r, V) samples.
    #[staticmethod]
    fn tabulated(samples: Vec<(f64, f64)>) -> PyResult<Self> {
        scattering::RadialPotential::tabulated(samples).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        scattering::RadialPotential::from_file(path).map(Self).map_err(err)
    }

    fn __call__(&self, r: f64) -> f64 {
        self.0.value(r)
    }

    #[getter]
    fn range(&self) -> f64 {
        self.0.range
    }

    #[getter]
    fn l1_norm(&self) -> f64 {
        self.0.l1_norm
    }

    fn scaled(&self, ell: f64) -> PyResult<Self> {
        self.0.scaled(ell).map(Self).map_err(err)
    }
}

#[pyclass(name = "ScatteringSolution", frozen)]
struct PySolution(Arc<scattering::ScatteringSolution>);

#[pymethods]
impl PySolution {
    #[getter]
    fn a(&self) -> f64 {
        self.0.a
    }

    #[getter]
    fn grid(&self) -> Vec<f64> {
        self.0.grid.clone()
    }

    #[getter]
    fn g(&self) -> Vec<f64> {
        self.0.g.clone()
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.0.residual
    }

    fn omega(&self, r: f64) -> f64 {
        self.0.omega(r)
    }
}

#[pyfunction]
fn solve_zero_energy(v: &PyPotential) -> PyResult<PySolution> {
    let sol = scattering::solve_zero_energy(&v.0, GridSpec::default_for(&v.0)).map_err(err)?;
    Ok(PySolution(Arc::new(sol)))
}

/// (a, a from ∫V(1−ω)/8π)
#[pyfunction]
fn scattering_length(v: &PyPotential) -> PyResult<(f64, f64)> {
    let s = scattering::scattering_length(&v.0).map_err(err)?;
    Ok((s.a, s.a_quadrature))
}

#[pyclass(name = "ModifiedScattering", frozen)]
struct PyModified(Arc<scattering::ModifiedScattering>);

#[pymethods]
impl PyModified {
    #[new]
    fn new(v: &PyPotential, ell: f64, lam: f64) -> PyResult<Self> {
        let ms = scattering::ModifiedScattering::from_potential(&v.0, ell, lam).map_err(err)?;
        Ok(Self(Arc::new(ms)))
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a
    }

    fn epsilon(&self, r: f64) -> f64 {
        self.0.epsilon(r)
    }

    fn epsilon_integral(&self) -> f64 {
        self.0.epsilon_integral()
    }

    fn epsilon_hat(&self, p: f64) -> f64 {
        self.0.epsilon_hat(p)
    }

    fn omega_hat(&self, p: f64) -> f64 {
        self.0.omega_hat(p)
    }

    fn omega_ell_lambda(&self, r: f64) -> f64 {
        self.0.omega_ell_lambda(r)
    }
}

fn modes_of(ms: &[(u32, u32, u32)]) -> Vec<NeumannMode> {
    ms.iter().map(|&(a, b, c)| NeumannMode::new(a, b, c)).collect()
}

/// Mode matrix of the symmetrized kernel on |m|∞ ≤ cutoff.
#[pyfunction]
#[pyo3(signature = (ms, n, cutoff=3, tol=1e-9))]
fn kernel_report<'py>(py: Python<'py>, ms: &PyModified, n: f64, cutoff: u32, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    let k = SymmetrizedKernel::new(n, ms.0.clone());
    let r = py
        .detach(|| kernel_diagonality(&k, &ModeLattice::new(cutoff, true), tol))
        .map_err(err)?;
    to_py(py, &r)
}

#[pyclass(name = "BogParams", frozen)]
struct PyBogParams(BogParams);

#[pymethods]
impl PyBogParams {
    #[new]
    #[pyo3(signature = (ms, n, temperature=0.0))]
    fn new(ms: &PyModified, n: f64, temperature: f64) -> PyResult<Self> {
        BogParams::new(n, temperature, ms.0.clone()).map(Self).map_err(err)
    }

    /// (A_p, B_p)
    fn coefficients(&self, p: f64) -> (f64, f64) {
        self.0.coefficients(p)
    }

    fn dispersion_table<'py>(&self, py: Python<'py>, cutoff: u32) -> PyResult<Bound<'py, PyAny>> {
        let t = DispersionTable::new(&self.0, &ModeLattice::new(cutoff, false)).map_err(err)?;
        to_py(py, &t.entries)
    }

    fn dispersion_deviation<'py>(&self, py: Python<'py>, p_grid: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &bogoliubov::dispersion_deviation(&self.0, &p_grid).map_err(err)?)
    }

    fn e_bog_deviation<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = py.detach(|| bogoliubov::e_bog_deviation(&self.0)).map_err(err)?;
        to_py(py, &r)
    }

    /// Truncated Fock-space spectrum of H_Bog on the given modes, with the
    /// shift against half the truncation.
    #[pyo3(signature = (modes, n_max=40))]
    fn oracle_spectrum<'py>(&self, py: Python<'py>, modes: Vec<(u32, u32, u32)>, n_max: usize) -> PyResult<Bound<'py, PyAny>> {
        let modes = modes_of(&modes);
        let r = py
            .detach(|| {
                fock::spectrum_with_convergence(
                    |cut| fock::build_h_bog(&self.0, &modes, &fock::build_basis(modes.len(), Sector::AtMost(cut), DEFAULT_DIM_LIMIT)?),
                    n_max,
                    1e-8,
                )
            })
            .map_err(err)?;
        to_py(py, &r)
    }

    /// Exact levels from the Bogoliubov rotation.
    fn bogoliubov_levels(&self, modes: Vec<(u32, u32, u32)>, count: usize) -> PyResult<Vec<f64>> {
        let qm = fock::bog_modes(&self.0, &modes_of(&modes)).map_err(err)?;
        fock::quadratic_levels(&qm, count).map_err(err)
    }
}

/// (ν, φ, e) of the rotation diagonalizing A a†a + ½B(a†a† + aa).
#[pyfunction]
fn rotation(a: f64, b: f64) -> PyResult<(f64, f64, f64)> {
    let r = bogoliubov::rotation(a, b).map_err(err)?;
    Ok((r.nu, r.phi, r.e))
}

/// (E_{n,ℓ}, tail estimate) in box units.
#[pyfunction]
#[pyo3(signature = (n, ell, a, cutoff=None))]
fn ground_energy(py: Python<'_>, n: f64, ell: f64, a: f64, cutoff: Option<usize>) -> PyResult<(f64, f64)> {
    let r = py.detach(|| bogoliubov::ground_energy(n, ell, a, cutoff)).map_err(err)?;
    Ok((r.value, r.tail_estimate))
}

#[pyfunction]
fn lhy_closed(n: f64, ell: f64, a: f64) -> f64 {
    bogoliubov::lhy_closed(n, ell, a)
}

#[pyfunction]
fn lhy_half_space_integral() -> f64 {
    bogoliubov::lhy_half_space_integral()
}

#[pyfunction]
#[pyo3(signature = (n, ell, a, temperature, with_lattice=false))]
fn f_bog<'py>(py: Python<'py>, n: f64, ell: f64, a: f64, temperature: f64, with_lattice: bool) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| bogoliubov::f_bog(n, ell, a, temperature, with_lattice)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn riemann_gap<'py>(py: Python<'py>, hbar: f64, q: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bogoliubov::riemann_gap(hbar, q).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (rho, a, temperature=0.0))]
fn lhy_free_energy<'py>(py: Python<'py>, rho: f64, a: f64, temperature: f64) -> PyResult<Bound<'py, PyAny>> {
    let tp = thermo::ThermoParams::new(rho, a, temperature).map_err(err)?;
    to_py(py, &thermo::lhy_free_energy(&tp))
}

#[pyfunction]
fn schedule<'py>(py: Python<'py>, rho: f64, a: f64, range: f64) -> PyResult<Bound<'py, PyAny>> {
    let tp = thermo::ThermoParams::new(rho, a, 0.0).map_err(err)?;
    to_py(py, &thermo::schedule(&tp, range).map_err(err)?)
}

/// Localization bound with a Python callable n ↦ F_ℓ(n).
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn box_assembly<'py>(
    py: Python<'py>,
    rho: f64,
    a: f64,
    temperature: f64,
    ell: f64,
    mu: f64,
    n0: usize,
    provider: Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let tp = thermo::ThermoParams::new(rho, a, temperature).map_err(err)?;
    let n_cap = ((40.0 * rho * ell.powi(3)).ceil() as usize).min(thermo::N_GRID_CAP);
    let values = (0..=n_cap)
        .map(|n| provider.call1((n,))?.extract::<f64>())
        .collect::<PyResult<Vec<f64>>>()?;
    let r = thermo::box_assembly(&tp, ell, mu, n0, |n| values[n]).map_err(err)?;
    to_py(py, &r)
}

/// Acceptance checks as dicts; all of them when `criteria` is empty.
#[pyfunction]
#[pyo3(signature = (criteria=Vec::new()))]
fn run_checks<'py>(py: Python<'py>, criteria: Vec<u8>) -> PyResult<Bound<'py, PyAny>> {
    let checks = py.detach(|| verify::all_checks_filtered(&criteria));
    to_py(py, &checks)
}

#[pymodule]
pub fn pybosegas(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPotential>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyModified>()?;
    m.add_class::<PyBogParams>()?;
    m.add_function(wrap_pyfunction!(solve_zero_energy, m)?)?;
    m.add_function(wrap_pyfunction!(scattering_length, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_report, m)?)?;
    m.add_function(wrap_pyfunction!(rotation, m)?)?;
    m.add_function(wrap_pyfunction!(ground_energy, m)?)?;
    m.add_function(wrap_pyfunction!(lhy_closed, m)?)?;
    m.add_function(wrap_pyfunction!(lhy_half_space_integral, m)?)?;
    m.add_function(wrap_pyfunction!(f_bog, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_gap, m)?)?;
    m.add_function(wrap_pyfunction!(lhy_free_energy, m)?)?;
    m.add_function(wrap_pyfunction!(schedule, m)?)?;
    m.add_function(wrap_pyfunction!(box_assembly, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
