//! Python bindings: `import qwvd`.

// pymethods take `&self`; Python keyword signatures set the arity
#![allow(clippy::wrong_self_convention, clippy::too_many_arguments)]

use std::f64::consts::PI;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use qwvd::convcorr::{Combined, CorrSign, Operator, SecondFactor, TheoremVariant};
use qwvd::verify::{self, TheoremId};
use qwvd::{AnalyticSignal, Envelope, GridPlan, GridSizes, OlctParams, ParamPair, Quaternion, Settings, Signal, WvdEvaluator};

fn to_py(e: qwvd::Error) -> PyErr {
    match e {
        qwvd::Error::Io(_) | qwvd::Error::Csv(_) | qwvd::Error::Json(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Quaternion", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyQuaternion(Quaternion);

#[pymethods]
impl PyQuaternion {
    #[new]
    #[pyo3(signature = (w=0.0, x=0.0, y=0.0, z=0.0))]
    fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        PyQuaternion(Quaternion::new(w, x, y, z))
    }

    #[getter]
    fn w(&self) -> f64 {
        self.0.w
    }

    #[getter]
    fn x(&self) -> f64 {
        self.0.x
    }

    #[getter]
    fn y(&self) -> f64 {
        self.0.y
    }

    #[getter]
    fn z(&self) -> f64 {
        self.0.z
    }

    fn conj(&self) -> Self {
        PyQuaternion(self.0.conj())
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn to_tuple(&self) -> (f64, f64, f64, f64) {
        (self.0.w, self.0.x, self.0.y, self.0.z)
    }

    fn __add__(&self, other: &Self) -> Self {
        PyQuaternion(self.0 + other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyQuaternion(self.0 - other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyQuaternion(self.0 * other.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Quaternion({}, {}, {}, {})", self.0.w, self.0.x, self.0.y, self.0.z)
    }
}

#[pyclass(name = "OlctParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyParams(OlctParams);

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (a, b, c, d, r=0.0, s=0.0))]
    fn new(a: f64, b: f64, c: f64, d: f64, r: f64, s: f64) -> PyResult<Self> {
        OlctParams::new(a, b, c, d, r, s).map(PyParams).map_err(to_py)
    }

    /// `(0, 1, -1, 0 | 0, 0)`.
    #[staticmethod]
    fn fourier() -> Self {
        PyParams(qwvd::qft_params())
    }

    fn to_tuple(&self) -> (f64, f64, f64, f64, f64, f64) {
        let [a, b, c, d, r, s] = self.0.to_array();
        (a, b, c, d, r, s)
    }

    fn __repr__(&self) -> String {
        let [a, b, c, d, r, s] = self.0.to_array();
        format!("OlctParams({a}, {b}, {c}, {d}, {r}, {s})")
    }
}

#[pyclass(name = "ParamPair", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyPair(ParamPair);

#[pymethods]
impl PyPair {
    #[new]
    fn new(a1: &PyParams, a2: &PyParams) -> Self {
        PyPair(ParamPair::new(a1.0, a2.0))
    }

    #[staticmethod]
    fn fourier() -> Self {
        PyPair(ParamPair::qft())
    }

    #[getter]
    fn a1(&self) -> PyParams {
        PyParams(self.0.a1)
    }

    #[getter]
    fn a2(&self) -> PyParams {
        PyParams(self.0.a2)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }
}

/// Gaussian `coeff * exp(-alpha |t - shift|^2)` with optional i/j
/// modulation.
#[pyclass(name = "Signal", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PySignal(AnalyticSignal);

#[pymethods]
impl PySignal {
    #[new]
    #[pyo3(signature = (coeff=None, alpha=PI, shift=(0.0, 0.0), mod_i=0.0, mod_j=0.0))]
    fn new(coeff: Option<PyQuaternion>, alpha: f64, shift: (f64, f64), mod_i: f64, mod_j: f64) -> PyResult<Self> {
        let coeff = coeff.map_or(Quaternion::ONE, |q| q.0);
        AnalyticSignal::new(coeff, alpha, [shift.0, shift.1], mod_i, mod_j).map(PySignal).map_err(to_py)
    }

    /// Parses `coeff=w,x,y,z;alpha=..;shift=..,..;modi=..;modj=..`.
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        spec.parse().map(PySignal).map_err(to_py)
    }

    fn __call__(&self, t1: f64, t2: f64) -> PyQuaternion {
        PyQuaternion(self.0.eval([t1, t2]))
    }

    fn l2_norm(&self) -> f64 {
        self.0.l2_norm()
    }

    fn __repr__(&self) -> String {
        format!("Signal.parse({:?})", self.0.to_string())
    }
}

fn sizes(n: Option<usize>) -> PyResult<GridSizes> {
    let s = n.map(GridSizes::base).unwrap_or_default();
    s.validate().map_err(to_py)?;
    Ok(s)
}

fn plan(signals: &[&AnalyticSignal], params: &ParamPair, n: Option<usize>, half_width: Option<f64>) -> PyResult<GridPlan> {
    let s = sizes(n)?;
    match half_width {
        Some(l) => GridPlan::uniform(l, s),
        None => GridPlan::auto(&Envelope::of(signals), params, s),
    }
    .map_err(to_py)
}

fn pair(params: Option<&PyPair>) -> ParamPair {
    params.map_or(ParamPair::qft(), |p| p.0)
}

/// Distribution `W_{f,g}(t, u)`; `g` defaults to `f`.
#[pyfunction]
#[pyo3(signature = (f, t, u, g=None, params=None, n=None, half_width=None))]
fn wvd(
    py: Python<'_>,
    f: &PySignal,
    t: (f64, f64),
    u: (f64, f64),
    g: Option<&PySignal>,
    params: Option<&PyPair>,
    n: Option<usize>,
    half_width: Option<f64>,
) -> PyResult<PyQuaternion> {
    let (f, g, p) = (f.0, g.map_or(f.0, |g| g.0), pair(params));
    let grids = plan(&[&f, &g], &p, n, half_width)?;
    let w = py.detach(|| WvdEvaluator::new(p, grids.n).point(&f, &g, [t.0, t.1], [u.0, u.1]));
    Ok(PyQuaternion(w))
}

/// Forward transform of `f` at `u`.
#[pyfunction]
#[pyo3(signature = (f, u, params=None, n=None, half_width=None))]
fn qolct(f: &PySignal, u: (f64, f64), params: Option<&PyPair>, n: Option<usize>, half_width: Option<f64>) -> PyResult<PyQuaternion> {
    let p = pair(params);
    let grids = plan(&[&f.0], &p, n, half_width)?;
    qwvd::qolct_forward(&f.0, &p, [u.0, u.1], grids.signal).map(PyQuaternion).map_err(to_py)
}

fn combine(
    op: Operator,
    f: &PySignal,
    g: &PySignal,
    t: (f64, f64),
    params: Option<&PyPair>,
    n: Option<usize>,
    half_width: Option<f64>,
) -> PyResult<PyQuaternion> {
    let p = pair(params);
    let grids = plan(&[&f.0, &g.0], &p, n, half_width)?;
    let h = Combined::new(op, &f.0, g.0, &p, grids.signal).map_err(to_py)?;
    Ok(PyQuaternion(h.eval([t.0, t.1])))
}

/// `(f * g)(t)`.
#[pyfunction]
#[pyo3(signature = (f, g, t, params=None, n=None, half_width=None))]
fn convolve(
    f: &PySignal,
    g: &PySignal,
    t: (f64, f64),
    params: Option<&PyPair>,
    n: Option<usize>,
    half_width: Option<f64>,
) -> PyResult<PyQuaternion> {
    combine(Operator::Convolution, f, g, t, params, n, half_width)
}

/// `(f o g)(t)`.
#[pyfunction]
#[pyo3(signature = (f, g, t, params=None, n=None, half_width=None))]
fn correlate(
    f: &PySignal,
    g: &PySignal,
    t: (f64, f64),
    params: Option<&PyPair>,
    n: Option<usize>,
    half_width: Option<f64>,
) -> PyResult<PyQuaternion> {
    combine(Operator::Correlation, f, g, t, params, n, half_width)
}

/// Runs one identity check (or `"all"`) and returns the reports as dicts.
#[pyfunction(name = "verify")]
#[pyo3(signature = (theorem, f=None, g=None, params=None, n=None, half_width=None, second_factor="conj-conv", corr_sign="plus", all_variants=false))]
fn check<'py>(
    py: Python<'py>,
    theorem: &str,
    f: Option<&PySignal>,
    g: Option<&PySignal>,
    params: Option<&PyPair>,
    n: Option<usize>,
    half_width: Option<f64>,
    second_factor: &str,
    corr_sign: &str,
    all_variants: bool,
) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let ids = if theorem == "all" { TheoremId::ALL.to_vec() } else { vec![theorem.parse::<TheoremId>().map_err(to_py)?] };
    let variants = if all_variants {
        TheoremVariant::all().to_vec()
    } else {
        vec![TheoremVariant {
            second_factor: second_factor.parse::<SecondFactor>().map_err(to_py)?,
            corr_sign: corr_sign.parse::<CorrSign>().map_err(to_py)?,
        }]
    };
    let f = f.map_or(AnalyticSignal::unit_gaussian(), |s| s.0);
    let g = g.map_or(f, |s| s.0);
    let p = pair(params);
    let settings = Settings { half_width, ..Settings::default().with_sizes(sizes(n)?) };
    let reports = py.detach(|| ids.iter().flat_map(|&id| verify::verify_one(id, &f, &g, &p, &settings, &variants)).collect::<Vec<_>>());
    let json = py.import("json")?;
    reports.iter().map(|r| json.call_method1("loads", (r.to_json().map_err(to_py)?,))).collect()
}

#[pymodule(name = "qwvd")]
fn qwvd_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuaternion>()?;
    m.add_class::<PyParams>()?;
    m.add_class::<PyPair>()?;
    m.add_class::<PySignal>()?;
    m.add_function(wrap_pyfunction!(wvd, m)?)?;
    m.add_function(wrap_pyfunction!(qolct, m)?)?;
    m.add_function(wrap_pyfunction!(convolve, m)?)?;
    m.add_function(wrap_pyfunction!(correlate, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
