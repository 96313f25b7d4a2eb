//! Python bindings: the main types and operations of the tangent-family
//! laboratory, exposed as the `_tanlab` extension module.

// pyo3 0.20 macro expansion trips the non_local_definitions lint on new rustc
#![allow(non_local_definitions)]

use num_complex::Complex64;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use tanlab_core::rotation::RotationNumber;
use tanlab_core::scan::{self, ScanConfig};
use tanlab_core::siegel::{self, IndicatorConfig};
use tanlab_core::tangent::{EvalResult, Polyline, TangentMap as CoreMap};

fn to_py_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// f(z) = lambda * tan(z).
#[pyclass(name = "TangentMap")]
struct PyTangentMap {
    inner: CoreMap,
}

#[pymethods]
impl PyTangentMap {
    #[new]
    fn new(lambda: Complex64) -> PyResult<Self> {
        Ok(Self {
            inner: CoreMap::new(lambda).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn lambda(&self) -> Complex64 {
        self.inner.lambda()
    }

    /// f(z); raises ZeroDivisionError at poles of tan.
    fn evaluate(&self, z: Complex64) -> PyResult<Complex64> {
        match self.inner.evaluate(z) {
            EvalResult::Finite(v) => Ok(v),
            EvalResult::Pole => Err(PyZeroDivisionError::new_err("pole of tan")),
        }
    }

    fn derivative(&self, z: Complex64) -> PyResult<Complex64> {
        match self.inner.derivative(z) {
            EvalResult::Finite(v) => Ok(v),
            EvalResult::Pole => Err(PyZeroDivisionError::new_err("pole of tan")),
        }
    }

    fn is_pole(&self, z: Complex64) -> bool {
        self.inner.evaluate(z).is_pole()
    }

    fn asymptotic_values(&self) -> (Complex64, Complex64) {
        self.inner.asymptotic_values()
    }

    fn inverse_branch(&self, w: Complex64, k: i32) -> PyResult<Complex64> {
        self.inner.inverse_branch(w, k).map_err(to_py_err)
    }

    /// Lift a curve (list of complex points) through the inverse branch
    /// passing through `base`.
    fn lift_curve(&self, points: Vec<Complex64>, base: Complex64) -> PyResult<Vec<Complex64>> {
        let curve = Polyline::new(points, false).map_err(to_py_err)?;
        let lift = self.inner.lift_curve(&curve, base).map_err(to_py_err)?;
        Ok(lift.points().to_vec())
    }

    /// (center, radius) of the image circle of the line {Im z = +-R}.
    fn line_image_circle(&self, half_height: f64, upper: bool) -> (Complex64, f64) {
        let side = if upper {
            tanlab_core::tangent::Side::Upper
        } else {
            tanlab_core::tangent::Side::Lower
        };
        self.inner.line_image_circle(half_height, side)
    }

    fn halfplane_radius_for_disk(&self, r: f64) -> PyResult<f64> {
        self.inner
            .halfplane_radius_for_disk(r)
            .map(|s| s.half_width)
            .map_err(to_py_err)
    }
}

fn build_rotation(spec: &str, depth: usize, precision: u32) -> PyResult<RotationNumber> {
    match spec {
        "golden" => Ok(RotationNumber::golden(depth, precision)),
        "sqrt2m1" => Ok(RotationNumber::sqrt2_minus_1(depth, precision)),
        other => {
            let x: f64 = other
                .parse()
                .map_err(|_| PyValueError::new_err(format!("bad rotation number '{other}'")))?;
            RotationNumber::from_real(x, depth, precision).map_err(to_py_err)
        }
    }
}

/// Continued-fraction data for a rotation number ("golden", "sqrt2m1", or a
/// decimal in (0,1)).
#[pyfunction]
#[pyo3(signature = (spec, depth = 30, precision = 50))]
fn continued_fraction(py: Python<'_>, spec: &str, depth: usize, precision: u32) -> PyResult<PyObject> {
    let rn = build_rotation(spec, depth, precision)?;
    let d = PyDict::new(py);
    d.set_item("theta", rn.theta())?;
    d.set_item("quotients", rn.quotients().to_vec())?;
    d.set_item("rational", rn.is_rational())?;
    d.set_item("max_quotient", rn.bounded_type_prefix().max_quotient)?;
    let convergents: Vec<(String, String)> = rn
        .convergents()
        .iter()
        .map(|(p, q)| (p.to_string(), q.to_string()))
        .collect();
    d.set_item("convergents", convergents)?;
    Ok(d.into())
}

/// Partial Brjuno sum of depth n (Yoccoz normalization).
#[pyfunction]
#[pyo3(signature = (spec, n, depth = 60, precision = 50))]
fn brjuno_partial(spec: &str, n: usize, depth: usize, precision: u32) -> PyResult<(f64, f64)> {
    let rn = build_rotation(spec, depth, precision)?;
    let b = rn.brjuno_partial(n).map_err(to_py_err)?;
    Ok((b.value, b.beta_tail))
}

/// e^{2 pi i theta}.
#[pyfunction]
#[pyo3(signature = (spec, precision = 50))]
fn multiplier(spec: &str, precision: u32) -> PyResult<Complex64> {
    Ok(build_rotation(spec, 5, precision)?.multiplier())
}

/// Schröder linearizer coefficients c_1..c_N as complex numbers.
#[pyfunction]
#[pyo3(signature = (spec, n_coeffs = 200, precision = 50))]
fn linearizer_coeffs(spec: &str, n_coeffs: usize, precision: u32) -> PyResult<Vec<Complex64>> {
    let rn = build_rotation(spec, 60, precision)?;
    let series = siegel::linearizer(&rn, n_coeffs, precision).map_err(to_py_err)?;
    Ok(series.coeffs_f64())
}

/// Full Siegel-disk indicator run; returns a dict mirroring the JSON report.
#[pyfunction]
#[pyo3(signature = (spec, n_coeffs = 200, precision = 50, rhos = None))]
fn siegel_indicators(
    py: Python<'_>,
    spec: &str,
    n_coeffs: usize,
    precision: u32,
    rhos: Option<Vec<f64>>,
) -> PyResult<PyObject> {
    let rn = build_rotation(spec, 60, precision)?;
    let series = siegel::linearizer(&rn, n_coeffs, precision).map_err(to_py_err)?;
    let rhos = rhos.unwrap_or_else(|| vec![0.9, 0.95, 0.99, 0.995]);
    let est = siegel::unboundedness_indicators(&series, &rhos, &IndicatorConfig::default())
        .map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("theta", est.theta)?;
    d.set_item("lambda", Complex64::new(est.lambda_re, est.lambda_im))?;
    d.set_item("radius_estimate", est.radius_estimate)?;
    d.set_item("rhos", est.rhos.clone())?;
    d.set_item("extents", est.extents.clone())?;
    d.set_item("image_gaps", est.image_gaps.clone())?;
    d.set_item("verdict", format!("{:?}", est.verdict))?;
    d.set_item("heuristic", est.heuristic)?;
    Ok(d.into())
}

/// tan(z) Taylor coefficients up to degree n.
#[pyfunction]
fn tan_series(n: usize) -> Vec<f64> {
    siegel::tan_series(n)
}

/// Classify a dynamical-plane grid; returns (nx, ny, class names row-major
/// from the bottom row up).
#[pyfunction]
#[pyo3(signature = (lambda, rect, res, max_iter = 2000))]
fn classify_grid(
    lambda: Complex64,
    rect: (f64, f64, f64, f64),
    res: (usize, usize),
    max_iter: u32,
) -> PyResult<(usize, usize, Vec<String>)> {
    let map = CoreMap::new(lambda).map_err(to_py_err)?;
    let config = ScanConfig {
        max_iter,
        ..ScanConfig::for_map(&map)
    };
    let grid = scan::scan_dynamical(
        &map,
        (
            Complex64::new(rect.0, rect.1),
            Complex64::new(rect.2, rect.3),
        ),
        res,
        &config,
    )
    .map_err(to_py_err)?;
    let names = grid.cells.iter().map(|c| scan::tag_name(&c.tag)).collect();
    Ok((grid.nx, grid.ny, names))
}

#[pymodule]
fn _tanlab(_py: Python<'_>, m: &PyModule) -> PyResult<()> {
    m.add_class::<PyTangentMap>()?;
    m.add_function(wrap_pyfunction!(continued_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(brjuno_partial, m)?)?;
    m.add_function(wrap_pyfunction!(multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(linearizer_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(siegel_indicators, m)?)?;
    m.add_function(wrap_pyfunction!(tan_series, m)?)?;
    m.add_function(wrap_pyfunction!(classify_grid, m)?)?;
    Ok(())
}
