//! Python bindings. Structured results (reports, scan statistics, derivative
//! audits) are returned as JSON strings with 17 significant digits.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use sendov_core::constructor::{self, NewtonOptions};
use sendov_core::reference::ReferenceSet;
use sendov_core::{derivcheck, json, probe, CandidateParams, ComplexPoly};

create_exception!(sendov, SendovError, PyValueError);

fn err(e: sendov_core::Error) -> PyErr {
    SendovError::new_err(e.to_string())
}

/// Parameters `(n, beta, a, b, c, d)` of one candidate polynomial.
#[pyclass(name = "Candidate", module = "sendov", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Candidate {
    pub inner: CandidateParams,
}

#[pymethods]
impl Candidate {
    #[new]
    fn new(n: usize, beta: f64, a: f64, b: f64, c: f64, d: Vec<f64>) -> PyResult<Self> {
        let inner = CandidateParams::new(n, beta, a, b, c, d).map_err(err)?;
        Ok(Self { inner })
    }

    /// The converged candidate for a published degree.
    #[staticmethod]
    fn published(n: usize) -> PyResult<Self> {
        solve_published(n).map(|inner| Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: CandidateParams =
            serde_json::from_str(text).map_err(|e| SendovError::new_err(e.to_string()))?;
        inner.validate().map_err(err)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        json::to_string_line(&self.inner).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c
    }

    #[getter]
    fn d(&self) -> Vec<f64> {
        self.inner.d.clone()
    }

    fn critical_points(&self) -> Vec<Complex64> {
        self.inner.critical_points()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!("Candidate(n={}, beta={}, a={}, b={}, c={}, d={:?})", p.n, p.beta, p.a, p.b, p.c, p.d)
    }
}

fn solve_published(n: usize) -> PyResult<CandidateParams> {
    let set = ReferenceSet::bundled();
    let row = set
        .row(n)
        .ok_or_else(|| SendovError::new_err(format!("no published candidate for n = {n}")))?;
    let out = constructor::newton_solve(n, &row.seed(3).map_err(err)?, &NewtonOptions::default()).map_err(err)?;
    if !out.converged {
        return Err(SendovError::new_err(format!("n = {n}: Newton did not converge")));
    }
    CandidateParams::from_vector(n, &out.x).map_err(err)
}

/// Roots, critical points and the distances `r`, `R`, `d(P)`.
#[pyclass(name = "Spectrum", module = "sendov", frozen)]
pub struct Spectrum {
    inner: sendov_core::Spectrum,
}

#[pymethods]
impl Spectrum {
    #[getter]
    fn roots(&self) -> Vec<Complex64> {
        self.inner.roots.clone()
    }

    #[getter]
    fn critical_points(&self) -> Vec<Complex64> {
        self.inner.critical_points.clone()
    }

    /// Number of roots on the unit circle; they come first in `roots`.
    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }

    #[getter]
    fn r(&self) -> f64 {
        self.inner.r
    }

    #[getter]
    #[allow(non_snake_case)]
    fn R(&self) -> f64 {
        self.inner.big_r
    }

    #[getter]
    fn d_p(&self) -> f64 {
        self.inner.d_p
    }
}

/// Ascending coefficients of `P`.
#[pyfunction]
pub fn build_candidate(candidate: &Candidate) -> PyResult<Vec<Complex64>> {
    Ok(sendov_core::build_candidate(&candidate.inner).map_err(err)?.into_coeffs())
}

/// All roots of the polynomial with the given ascending coefficients.
#[pyfunction]
pub fn find_roots(coeffs: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let p = ComplexPoly::new(coeffs).map_err(err)?;
    sendov_core::find_roots(&p).map_err(err)
}

#[pyfunction]
pub fn spectrum(candidate: &Candidate) -> PyResult<Spectrum> {
    let inner = sendov_core::spectrum(&candidate.inner).map_err(err)?;
    Ok(Spectrum { inner })
}

/// Property report for A-H as JSON.
#[pyfunction]
pub fn certify(py: Python<'_>, candidate: &Candidate) -> PyResult<String> {
    let params = candidate.inner.clone();
    let report = py.detach(|| sendov_core::certify_all(&params)).map_err(err)?;
    json::to_string_pretty(&report).map_err(err)
}

/// `(x, converged, iterations, residual_norm)` from damped Newton.
#[pyfunction]
pub fn newton_solve(n: usize, x0: Vec<f64>) -> PyResult<(Vec<f64>, bool, usize, f64)> {
    let out = constructor::newton_solve(n, &x0, &NewtonOptions::default()).map_err(err)?;
    Ok((out.x, out.converged, out.iterations, out.residual_norm))
}

/// Certified candidates from the given seeds, each with its report JSON.
#[pyfunction]
pub fn construct(py: Python<'_>, n: usize, seeds: Vec<Vec<f64>>) -> PyResult<Vec<(Candidate, String)>> {
    let found = py
        .detach(|| constructor::construct(n, &seeds, &NewtonOptions::default()))
        .map_err(err)?;
    found
        .candidates
        .into_iter()
        .map(|(inner, report)| Ok((Candidate { inner }, json::to_string_pretty(&report).map_err(err)?)))
        .collect()
}

/// Neighborhood scan statistics as JSON.
#[pyfunction]
#[pyo3(signature = (candidate, count, scale, rng_seed = 1))]
pub fn neighborhood_scan(
    py: Python<'_>,
    candidate: &Candidate,
    count: usize,
    scale: f64,
    rng_seed: u64,
) -> PyResult<String> {
    let params = candidate.inner.clone();
    let stats = py
        .detach(|| probe::neighborhood_scan(&params, count, scale, rng_seed))
        .map_err(err)?;
    json::to_string_pretty(&stats).map_err(err)
}

/// Finite-difference audit of the root derivatives as JSON.
#[pyfunction]
pub fn derivative_check(candidate: &Candidate) -> PyResult<String> {
    let report = derivcheck::derivative_check(&candidate.inner, None).map_err(err)?;
    json::to_string_pretty(&report).map_err(err)
}

/// Bundled published rows as `(n, beta, a, b, c)`.
#[pyfunction]
pub fn reference_rows() -> Vec<(usize, f64, f64, f64, f64)> {
    ReferenceSet::bundled()
        .rows
        .iter()
        .map(|r| (r.n, r.beta, r.a, r.b, r.c))
        .collect()
}

#[pymodule]
pub fn sendov(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SendovError", m.py().get_type::<SendovError>())?;
    m.add_class::<Candidate>()?;
    m.add_class::<Spectrum>()?;
    m.add_function(wrap_pyfunction!(build_candidate, m)?)?;
    m.add_function(wrap_pyfunction!(find_roots, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(newton_solve, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(neighborhood_scan, m)?)?;
    m.add_function(wrap_pyfunction!(derivative_check, m)?)?;
    m.add_function(wrap_pyfunction!(reference_rows, m)?)?;
    Ok(())
}
