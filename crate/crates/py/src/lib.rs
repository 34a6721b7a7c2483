//! Python bindings: problem parameters, validity, constants, scans, quotients
//! and the certification suites.

use std::str::FromStr;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rellich::radial::{hardy_lhs_rhs_radial, RadialProfile};
use rellich::witness::{hardy_witness, nearest_parameter, rellich_witness, CutoffFamily, CutoffShape};
use rellich::{
    constants, suites, verifier, Domain, EstimateKind, Exponent, ModeSet, ProblemParams, QuadratureSpec, SpectrumSet,
    C64,
};

fn err(e: rellich::Error) -> PyErr {
    if e.is_convergence_failure() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn exponent(p: &Bound<'_, PyAny>) -> PyResult<Exponent> {
    if let Ok(s) = p.extract::<String>() {
        return Exponent::from_str(&s).map_err(err);
    }
    Exponent::new(p.extract::<f64>()?).map_err(err)
}

/// Variant name of a library enum.
fn label(x: impl std::fmt::Debug) -> String {
    format!("{x:?}")
}

#[pyclass(name = "Params", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: ProblemParams,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (dim, p, alpha, b = C64::new(0.0, 0.0), c = C64::new(0.0, 0.0), domain = "whole", modes = None))]
    fn new(
        dim: u32,
        p: &Bound<'_, PyAny>,
        alpha: f64,
        b: C64,
        c: C64,
        domain: &str,
        modes: Option<Vec<u32>>,
    ) -> PyResult<Self> {
        let modes = modes.map(ModeSet::finite).unwrap_or(ModeSet::All);
        let inner = ProblemParams::new(dim, exponent(p)?, alpha)
            .with_b(b)
            .with_c(c)
            .with_domain(Domain::from_str(domain).map_err(err)?)
            .with_modes(modes);
        inner.validate().map_err(err)?;
        Ok(PyParams { inner })
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.inner.dim
    }

    /// `float("inf")` for the endpoint exponent.
    #[getter]
    fn p(&self) -> f64 {
        self.inner.p.as_f64()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn b(&self) -> C64 {
        self.inner.b
    }

    #[getter]
    fn c(&self) -> C64 {
        self.inner.c
    }

    #[getter]
    fn domain(&self) -> String {
        label(self.inner.domain)
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!("Params(N={}, p={}, alpha={}, b={}, c={}, domain={:?})", p.dim, p.p, p.alpha, p.b, p.c, p.domain)
    }
}

#[pyclass(name = "ConstantEstimate", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PyEstimate {
    kind: String,
    value: Option<f64>,
    lower: f64,
    upper: f64,
    source: String,
}

impl From<rellich::ConstantEstimate> for PyEstimate {
    fn from(e: rellich::ConstantEstimate) -> Self {
        let kind = match e.kind {
            EstimateKind::Exact => "exact",
            EstimateKind::Interval => "interval",
            EstimateKind::UpperOnly => "upper_only",
        };
        PyEstimate { kind: kind.into(), value: e.value, lower: e.lower, upper: e.upper, source: label(e.source) }
    }
}

#[pymethods]
impl PyEstimate {
    fn __repr__(&self) -> String {
        format!("ConstantEstimate(kind={}, lower={}, upper={}, source={})", self.kind, self.lower, self.upper, self.source)
    }
}

#[pyclass(name = "Validity", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PyValidity {
    holds: bool,
    /// `(n, reason)` pairs.
    violating_modes: Vec<(u32, String)>,
    checked_mode_bound: u32,
}

#[pyclass(name = "QuotientReport", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PyQuotient {
    n: u32,
    numerator: f64,
    denominator: f64,
    quotient: f64,
    power_quotient: f64,
    ln_ratio: f64,
    predicted: Option<PyEstimate>,
    verdict: String,
}

impl From<verifier::QuotientReport> for PyQuotient {
    fn from(r: verifier::QuotientReport) -> Self {
        PyQuotient {
            n: r.n,
            numerator: r.numerator,
            denominator: r.denominator,
            quotient: r.quotient,
            power_quotient: r.power_quotient,
            ln_ratio: r.ln_ratio,
            predicted: r.predicted.map(Into::into),
            verdict: label(r.verdict),
        }
    }
}

#[pyclass(name = "ScanReport", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PyScan {
    n: u32,
    log_k: f64,
    xi_star: f64,
    argmin: f64,
    empirical_inf: f64,
    empirical_inf_power: f64,
    predicted: Option<PyEstimate>,
    verdict: String,
}

#[pyclass(name = "Check", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PyCheck {
    check: String,
    expected: f64,
    got: f64,
    tol: f64,
    relation: String,
    passed: bool,
}

fn cutoff(k: f64, log_k: Option<f64>, shape: &str) -> PyResult<CutoffFamily> {
    let shape = match shape {
        "narrow" => CutoffShape::Narrow,
        "stretched" => CutoffShape::Stretched,
        other => return Err(PyValueError::new_err(format!("unknown cutoff shape '{other}'"))),
    };
    match log_k {
        Some(l) => CutoffFamily::from_log(l, shape),
        None => CutoffFamily::new(k, shape),
    }
    .map_err(err)
}

fn spec(tol: f64) -> PyResult<QuadratureSpec> {
    if !(1e-14..=1e-4).contains(&tol) {
        return Err(PyValueError::new_err(format!("tolerance {tol} outside [1e-14, 1e-4]")));
    }
    Ok(QuadratureSpec::with_tol(tol))
}

#[pyfunction]
fn gamma_p(params: &PyParams) -> C64 {
    constants::gamma_p(&params.inner)
}

#[pyfunction]
fn lambda_n(dim: u32, n: u32) -> f64 {
    constants::lambda_n(dim, n)
}

#[pyfunction]
#[pyo3(signature = (dim, p, c = 0.0))]
fn omega_p(dim: u32, p: &Bound<'_, PyAny>, c: f64) -> PyResult<f64> {
    Ok(constants::omega_p(dim, exponent(p)?, c))
}

#[pyfunction]
#[pyo3(signature = (dim, p, c = 0.0))]
fn omega_p_plus(dim: u32, p: &Bound<'_, PyAny>, c: f64) -> PyResult<f64> {
    Ok(constants::omega_p_plus(dim, exponent(p)?, c))
}

#[pyfunction]
fn kelvin_dual(dim: u32, p: &Bound<'_, PyAny>, alpha: f64) -> PyResult<f64> {
    Ok(constants::kelvin_dual(dim, exponent(p)?, alpha))
}

#[pyfunction]
#[pyo3(signature = (params, n_max = None))]
fn rellich_validity(params: &PyParams, n_max: Option<u32>) -> PyResult<PyValidity> {
    let v = constants::rellich_validity(&params.inner, n_max).map_err(err)?;
    Ok(PyValidity {
        holds: v.holds,
        violating_modes: v.violating_modes.iter().map(|(n, r)| (*n, label(r))).collect(),
        checked_mode_bound: v.checked_mode_bound,
    })
}

/// Best constant over the parameter's mode set, or over one order `n`.
#[pyfunction]
#[pyo3(signature = (params, n = None))]
fn best_constant(params: &PyParams, n: Option<u32>) -> PyResult<PyEstimate> {
    let e = match n {
        Some(n) => constants::mode_constant(&params.inner, n),
        None => constants::best_constant(&params.inner),
    };
    e.map(Into::into).map_err(err)
}

/// `(distance, argmin_n)` from `lam` to the union of shifted parabolas.
#[pyfunction]
#[pyo3(signature = (params, lam, n_max = 64))]
fn spectrum_distance(params: &PyParams, lam: C64, n_max: u32) -> (f64, u32) {
    let p = &params.inner;
    let orders: Vec<u32> = match &p.modes {
        ModeSet::Finite(v) => v.clone(),
        ModeSet::All if p.domain == Domain::HalfSpace => (1..=n_max).step_by(2).collect(),
        ModeSet::All => (0..=n_max).collect(),
    };
    rellich::spectrum_distance(lam, &SpectrumSet::new(constants::parabola(p), p.dim, orders))
}

#[pyfunction]
#[pyo3(signature = (params, n = 0, k = 1024.0, log_k = None, shape = "stretched", tol = 1e-10))]
fn rellich_scan(params: &PyParams, n: u32, k: f64, log_k: Option<f64>, shape: &str, tol: f64) -> PyResult<PyScan> {
    let r = verifier::rellich_scan(&params.inner, n, &cutoff(k, log_k, shape)?, &spec(tol)?).map_err(err)?;
    Ok(PyScan {
        n: r.n,
        log_k: r.log_k,
        xi_star: r.xi_star,
        argmin: r.argmin,
        empirical_inf: r.empirical_inf,
        empirical_inf_power: r.empirical_inf_power,
        predicted: r.predicted.map(Into::into),
        verdict: label(r.verdict),
    })
}

/// Quotient of the smooth plateau equal to one on `[e^lo, e^hi]` with
/// transitions of log-width `t`.
#[pyfunction]
#[pyo3(signature = (params, lo, hi, t, n = 0, tol = 1e-10))]
fn plateau_quotient(params: &PyParams, lo: f64, hi: f64, t: f64, n: u32, tol: f64) -> PyResult<PyQuotient> {
    if !(lo < hi && t > 0.0) {
        return Err(PyValueError::new_err("plateau needs lo < hi and t > 0"));
    }
    let f = RadialProfile::plateau(lo, hi, t);
    verifier::rellich_quotient(&params.inner, n, &f, &spec(tol)?).map(Into::into).map_err(err)
}

/// Quotient of the oscillating witness at `eta`, by default the parameter of
/// the nearest point of the parabola.
#[pyfunction]
#[pyo3(signature = (params, n = 0, eta = None, k = 1024.0, log_k = None, shape = "stretched", tol = 1e-10))]
fn witness_quotient(
    params: &PyParams,
    n: u32,
    eta: Option<f64>,
    k: f64,
    log_k: Option<f64>,
    shape: &str,
    tol: f64,
) -> PyResult<PyQuotient> {
    let eta = eta.unwrap_or_else(|| nearest_parameter(&params.inner, n));
    let f = rellich_witness(&params.inner, eta, &cutoff(k, log_k, shape)?);
    verifier::rellich_quotient(&params.inner, n, &f, &spec(tol)?).map(Into::into).map_err(err)
}

/// Hardy quotient of the radial witness with decay `eps` and stretch `m`.
#[pyfunction]
#[pyo3(signature = (dim, p, beta, eps = 0.01, m = 64.0, tol = 1e-10))]
fn hardy_quotient(dim: u32, p: f64, beta: f64, eps: f64, m: f64, tol: f64) -> PyResult<f64> {
    let f = hardy_witness(eps, m, beta, p, dim).map_err(err)?;
    Ok(hardy_lhs_rhs_radial(&f, beta, p, dim, &spec(tol)?).map_err(err)?.quotient())
}

#[pyfunction]
#[pyo3(signature = (name, seed = 42))]
fn run_suite(name: &str, seed: u64) -> PyResult<Vec<PyCheck>> {
    let checks = suites::run_suite(name, seed).map_err(err)?;
    Ok(checks
        .into_iter()
        .map(|c| PyCheck {
            check: c.check,
            expected: c.expected,
            got: c.got,
            tol: c.tol,
            relation: label(c.relation),
            passed: c.pass,
        })
        .collect())
}

#[pymodule]
fn rellich_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyEstimate>()?;
    m.add_class::<PyValidity>()?;
    m.add_class::<PyQuotient>()?;
    m.add_class::<PyScan>()?;
    m.add_class::<PyCheck>()?;
    m.add_function(wrap_pyfunction!(gamma_p, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_n, m)?)?;
    m.add_function(wrap_pyfunction!(omega_p, m)?)?;
    m.add_function(wrap_pyfunction!(omega_p_plus, m)?)?;
    m.add_function(wrap_pyfunction!(kelvin_dual, m)?)?;
    m.add_function(wrap_pyfunction!(rellich_validity, m)?)?;
    m.add_function(wrap_pyfunction!(best_constant, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_distance, m)?)?;
    m.add_function(wrap_pyfunction!(rellich_scan, m)?)?;
    m.add_function(wrap_pyfunction!(plateau_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(witness_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add("SUITES", suites::SUITES.to_vec())?;
    m.add("VERDICT_TOL", verifier::VERDICT_TOL)?;
    Ok(())
}
