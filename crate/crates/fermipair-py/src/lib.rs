//! Python bindings for the trapped-pair solver.
//!
//! The module mirrors the Rust crate's pipeline at function granularity:
//! special functions, branch energies, Schmidt entropies, and the toy
//! cross-check. Errors surface as `ValueError` with the Rust message.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fermipair::entangle;
use fermipair::specfun::{self, FArgs};
use fermipair::spectrum;
use fermipair::toymodel;

fn to_py(e: fermipair::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Trap geometry and interaction strength for one sweep point.
#[pyclass(frozen)]
#[derive(Clone)]
struct TrapParams {
    inner: spectrum::TrapParams,
}

#[pymethods]
impl TrapParams {
    /// `aspect_ratio` is omega_z / omega_perp, `inv_as` the dimensionless
    /// inverse scattering length -d_perp/a_s, `r0_ratio` the effective
    /// range |r0|/d_perp.
    #[new]
    fn new(aspect_ratio: f64, inv_as: f64, r0_ratio: f64) -> PyResult<Self> {
        let inner =
            spectrum::TrapParams::new(aspect_ratio, inv_as, r0_ratio).map_err(to_py)?;
        Ok(TrapParams { inner })
    }

    #[getter]
    fn aspect_ratio(&self) -> f64 {
        self.inner.lambda
    }

    #[getter]
    fn inv_as(&self) -> f64 {
        self.inner.inv_as
    }

    #[getter]
    fn r0_ratio(&self) -> f64 {
        self.inner.r0_ratio
    }

    fn within_broad_resonance_limit(&self) -> bool {
        self.inner.within_broad_resonance_limit()
    }

    fn __repr__(&self) -> String {
        format!(
            "TrapParams(aspect_ratio={}, inv_as={}, r0_ratio={})",
            self.inner.lambda, self.inner.inv_as, self.inner.r0_ratio
        )
    }
}

/// Truncation ramp result for one sweep point.
#[pyclass(frozen)]
struct ConvergenceReport {
    inner: entangle::ConvergenceReport,
}

#[pymethods]
impl ConvergenceReport {
    /// (K, spatial entropy) pairs in increasing K.
    #[getter]
    fn entropies(&self) -> Vec<(usize, f64)> {
        self.inner.entropies.clone()
    }

    #[getter]
    fn extrapolated(&self) -> f64 {
        self.inner.extrapolated
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    /// Best spatial-entropy estimate: the tail extrapolation when at least
    /// two truncations ran, the single raw value otherwise.
    fn best(&self) -> f64 {
        self.inner.best()
    }

    fn last_k(&self) -> usize {
        self.inner.last_k()
    }

    fn __repr__(&self) -> String {
        format!(
            "ConvergenceReport(best={}, last_k={}, converged={})",
            self.inner.best(),
            self.inner.last_k(),
            self.inner.converged
        )
    }
}

/// Real Gamma function.
#[pyfunction]
fn gamma(z: f64) -> PyResult<f64> {
    specfun::gamma_fn(z).map_err(to_py)
}

/// Regularized trap function F(u, eta) for a cylindrical oscillator with
/// axial frequency ratio eta.
#[pyfunction]
fn trap_function(u: f64, eta: f64) -> PyResult<f64> {
    let args = FArgs::new(u, eta).map_err(to_py)?;
    specfun::eval_f(&args).map_err(to_py)
}

/// Spherical-trap closed form of the trap function in the energy variable
/// x, -2 sqrt(pi) Gamma(-x) / Gamma(-x - 1/2).
#[pyfunction]
fn spherical_closed_form(x: f64) -> PyResult<f64> {
    specfun::f_spherical_closed_form(x).map_err(to_py)
}

/// Solves the quantization condition on one branch; returns the
/// dimensionless energy x and the closed-channel fraction beta^2.
#[pyfunction]
fn solve_branch_point(branch: usize, params: &TrapParams) -> PyResult<(f64, f64)> {
    let pt = spectrum::solve_branch_point(branch, &params.inner).map_err(to_py)?;
    Ok((pt.x, pt.beta2))
}

/// Traces one branch over a strictly increasing inv_as grid; returns
/// (inv_as, x, beta^2) rows.
#[pyfunction]
fn trace_branch(
    branch: usize,
    params: &TrapParams,
    inv_as_grid: Vec<f64>,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let traced =
        spectrum::trace_branch(branch, &inv_as_grid, &params.inner).map_err(to_py)?;
    Ok(traced
        .points
        .iter()
        .map(|pt| (pt.inv_as, pt.x, pt.beta2))
        .collect())
}

/// Schmidt weights of the spatial pair state at transverse truncation K,
/// descending, summing to one.
#[pyfunction]
fn schmidt_weights(branch: usize, params: &TrapParams, k: usize) -> PyResult<Vec<f64>> {
    let spectrum = entangle::branch_entanglement(branch, &params.inner, k).map_err(to_py)?;
    Ok(spectrum.kappa2)
}

/// Spatial and total (spatial + ln 2) entanglement entropies at transverse
/// truncation K.
#[pyfunction]
fn entanglement_entropy(
    branch: usize,
    params: &TrapParams,
    k: usize,
) -> PyResult<(f64, f64)> {
    let spectrum = entangle::branch_entanglement(branch, &params.inner, k).map_err(to_py)?;
    Ok((spectrum.spatial_entropy, spectrum.total_entropy))
}

/// Runs the truncation ramp `k_schedule`, stopping early once successive
/// spatial entropies agree within `tol`.
#[pyfunction]
fn converge_entropy(
    branch: usize,
    params: &TrapParams,
    k_schedule: Vec<usize>,
    tol: f64,
) -> PyResult<ConvergenceReport> {
    let inner = entangle::converge_entropy(branch, &params.inner, &k_schedule, tol)
        .map_err(to_py)?;
    Ok(ConvergenceReport { inner })
}

/// Axial truncation paired with transverse truncation `k_perp` at the
/// given aspect ratio.
#[pyfunction]
fn axial_cap(k_perp: usize, aspect_ratio: f64) -> usize {
    entangle::axial_cap(k_perp, aspect_ratio)
}

/// Entropy of the three-level toy model at coupling ratio g / (omega - delta).
#[pyfunction]
fn toy_entropy(ratio: f64) -> PyResult<f64> {
    toymodel::toy_curve_point(ratio).map_err(to_py)
}

/// Strong-coupling limit of the toy-model entropy.
#[pyfunction]
fn toy_saturation_entropy() -> f64 {
    toymodel::toy_saturation_entropy()
}


#[pymodule]
fn fermipair_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", fermipair::VERSION)?;
    m.add_class::<TrapParams>()?;
    m.add_class::<ConvergenceReport>()?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(trap_function, m)?)?;
    m.add_function(wrap_pyfunction!(spherical_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(solve_branch_point, m)?)?;
    m.add_function(wrap_pyfunction!(trace_branch, m)?)?;
    m.add_function(wrap_pyfunction!(schmidt_weights, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(converge_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(axial_cap, m)?)?;
    m.add_function(wrap_pyfunction!(toy_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(toy_saturation_entropy, m)?)?;
    Ok(())
}
