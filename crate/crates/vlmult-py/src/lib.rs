//! Python bindings for the vlmult toolkit: grids and sampled functions,
//! variable exponents, Luxemburg norms, multiplier operators, maximal
//! functions, power weights and the experiment harness.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use vlmult::exponents::ExponentField;
use vlmult::grid::{GridSpec, SampledFunction};
use vlmult::harness::config::HarnessConfig;
use vlmult::norms;
use vlmult::operators;
use vlmult::symbol::Symbol;
use vlmult::weights;
use vlmult::Error;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Grid", frozen)]
#[derive(Clone, Copy)]
struct PyGrid {
    inner: GridSpec,
}

#[pymethods]
impl PyGrid {
    #[new]
    fn new(dim: usize, half_width: f64, samples: usize) -> PyResult<Self> {
        Ok(Self { inner: GridSpec::new(dim, half_width, samples).map_err(err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn half_width(&self) -> f64 {
        self.inner.half_width()
    }

    #[getter]
    fn samples(&self) -> usize {
        self.inner.samples()
    }

    #[getter]
    fn spacing(&self) -> f64 {
        self.inner.spacing()
    }

    #[getter]
    fn freq_spacing(&self) -> f64 {
        self.inner.freq_spacing()
    }

    fn x_nodes(&self) -> Vec<f64> {
        (0..self.inner.samples()).map(|j| self.inner.x_node(j)).collect()
    }

    fn freq_nodes(&self) -> Vec<f64> {
        (0..self.inner.samples()).map(|k| self.inner.freq_node(k)).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Grid(dim={}, half_width={}, samples={})",
            self.inner.dim(),
            self.inner.half_width(),
            self.inner.samples()
        )
    }
}

#[pyclass(name = "Function")]
#[derive(Clone)]
struct PyFunction {
    inner: SampledFunction,
}

#[pymethods]
impl PyFunction {
    #[new]
    fn new(grid: &PyGrid, values: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self { inner: SampledFunction::from_values(grid.inner, values).map_err(err)? })
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid { inner: self.inner.grid() }
    }

    fn values(&self) -> Vec<Complex64> {
        self.inner.values().to_vec()
    }

    fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    fn max_abs_diff(&self, other: &PyFunction) -> f64 {
        self.inner.max_abs_diff(&other.inner)
    }

    fn scaled(&self, c: Complex64) -> Self {
        Self { inner: self.inner.scaled(c) }
    }

    fn add(&self, other: &PyFunction) -> PyResult<Self> {
        Ok(Self { inner: self.inner.add(&other.inner).map_err(err)? })
    }

    fn sub(&self, other: &PyFunction) -> PyResult<Self> {
        Ok(Self { inner: self.inner.sub(&other.inner).map_err(err)? })
    }

    fn pointwise_mul(&self, other: &PyFunction) -> PyResult<Self> {
        Ok(Self { inner: self.inner.pointwise_mul(&other.inner).map_err(err)? })
    }

    fn integrate(&self) -> Complex64 {
        vlmult::grid::integrate(&self.inner)
    }
}

#[pyclass(name = "Exponent", frozen)]
#[derive(Clone)]
struct PyExponent {
    inner: ExponentField,
}

#[pymethods]
impl PyExponent {
    #[staticmethod]
    fn constant(value: f64) -> PyResult<Self> {
        Ok(Self { inner: ExponentField::constant(value).map_err(err)? })
    }

    #[staticmethod]
    fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: ExponentField::piecewise(breaks, values).map_err(err)? })
    }

    #[staticmethod]
    fn radial_smooth(p_inf: f64, amplitude: f64, radius: f64, center: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: ExponentField::radial_smooth(p_inf, amplitude, radius, center).map_err(err)?,
        })
    }

    #[getter]
    fn p_minus(&self) -> f64 {
        self.inner.p_minus()
    }

    #[getter]
    fn p_plus(&self) -> f64 {
        self.inner.p_plus()
    }

    fn evaluate(&self, x: Vec<f64>) -> f64 {
        self.inner.evaluate(&x)
    }
}

#[pyclass(name = "Symbol", frozen)]
#[derive(Clone)]
struct PySymbol {
    inner: Symbol,
}

#[pymethods]
impl PySymbol {
    #[staticmethod]
    fn constant(arity: usize, value: f64) -> Self {
        Self { inner: Symbol::constant(arity, value) }
    }

    #[staticmethod]
    fn gaussian(arity: usize, scale: f64) -> Self {
        Self { inner: Symbol::gaussian(arity, scale) }
    }

    #[staticmethod]
    fn coifman_meyer(arity: usize, theta: f64) -> Self {
        Self { inner: Symbol::coifman_meyer(arity, theta) }
    }

    #[staticmethod]
    fn difference(base: &PySymbol) -> PyResult<Self> {
        Ok(Self { inner: Symbol::difference(base.inner.clone()).map_err(err)? })
    }

    #[staticmethod]
    fn tensor(factors: Vec<PySymbol>) -> PyResult<Self> {
        let fs = factors.into_iter().map(|f| f.inner).collect();
        Ok(Self { inner: Symbol::tensor(fs).map_err(err)? })
    }

    #[staticmethod]
    fn indicator(arity: usize, lo: Vec<f64>, hi: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: Symbol::indicator(arity, lo, hi).map_err(err)? })
    }

    #[staticmethod]
    fn product(factors: Vec<PySymbol>) -> PyResult<Self> {
        let fs = factors.into_iter().map(|f| f.inner).collect();
        Ok(Self { inner: Symbol::product(fs).map_err(err)? })
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn eval(&self, zeta: Vec<f64>) -> Complex64 {
        self.inner.eval(&zeta)
    }
}

#[pyclass(name = "Weight", frozen)]
#[derive(Clone)]
struct PyWeight {
    inner: weights::PowerWeight,
}

#[pymethods]
impl PyWeight {
    #[new]
    fn new(center: Vec<f64>, beta_inf: f64, singular: Vec<(Vec<f64>, f64)>) -> PyResult<Self> {
        Ok(Self { inner: weights::PowerWeight::new(center, beta_inf, singular).map_err(err)? })
    }

    fn evaluate(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.evaluate(&x).map_err(err)
    }
}

#[pyfunction]
fn forward_transform(f: &PyFunction) -> PyFunction {
    PyFunction { inner: vlmult::grid::forward_transform(&f.inner) }
}

#[pyfunction]
fn inverse_transform(f: &PyFunction) -> PyFunction {
    PyFunction { inner: vlmult::grid::inverse_transform(&f.inner) }
}

#[pyfunction]
fn luxemburg_norm(f: &PyFunction, p: &PyExponent) -> PyResult<f64> {
    Ok(norms::luxemburg_norm(&f.inner, &p.inner).map_err(err)?.value)
}

#[pyfunction]
fn norm(f: &PyFunction, p: &PyExponent) -> PyResult<f64> {
    Ok(norms::norm_auto(&f.inner, &p.inner).map_err(err)?.value)
}

#[pyfunction]
fn modular(f: &PyFunction, p: &PyExponent) -> f64 {
    norms::modular(&f.inner, &p.inner, None)
}

#[pyfunction]
fn weighted_norm(f: &PyFunction, p: &PyExponent, w: &PyWeight) -> PyResult<f64> {
    Ok(norms::weighted_norm(&f.inner, &p.inner, &w.inner).map_err(err)?.value)
}

#[pyfunction]
fn apply_linear(m: &PySymbol, f: &PyFunction) -> PyResult<PyFunction> {
    Ok(PyFunction { inner: operators::apply_linear(&m.inner, &f.inner).map_err(err)? })
}

#[pyfunction]
fn apply_bilinear(m: &PySymbol, f: &PyFunction, g: &PyFunction) -> PyResult<PyFunction> {
    Ok(PyFunction { inner: operators::apply_bilinear(&m.inner, &f.inner, &g.inner).map_err(err)? })
}

#[pyfunction]
fn hilbert(f: &PyFunction) -> PyResult<PyFunction> {
    Ok(PyFunction { inner: operators::hilbert(&f.inner).map_err(err)? })
}

#[pyfunction]
fn bandlimit(a: f64, b: f64, f: &PyFunction) -> PyResult<PyFunction> {
    Ok(PyFunction { inner: operators::bandlimit(a, b, &f.inner).map_err(err)? })
}

#[pyfunction]
fn gaussian_g(lambda: f64, grid: &PyGrid) -> PyResult<PyFunction> {
    Ok(PyFunction { inner: operators::gaussian_g(lambda, &grid.inner).map_err(err)? })
}

#[pyfunction]
fn hl_maximal(f: &PyFunction) -> PyResult<PyFunction> {
    Ok(PyFunction { inner: vlmult::maximal::hl_maximal(&f.inner).map_err(err)? })
}

#[pyfunction]
fn sharp_maximal(f: &PyFunction) -> PyResult<PyFunction> {
    Ok(PyFunction { inner: vlmult::maximal::sharp_maximal(&f.inner).map_err(err)? })
}

#[pyfunction]
fn multilinear_maximal(fs: Vec<PyFunction>, p0: f64) -> PyResult<PyFunction> {
    let refs: Vec<&SampledFunction> = fs.iter().map(|f| &f.inner).collect();
    Ok(PyFunction { inner: vlmult::maximal::multilinear_maximal(&refs, p0).map_err(err)? })
}

#[pyfunction]
fn ap_constant(w: &PyWeight, p: f64, grid: &PyGrid) -> PyResult<f64> {
    weights::ap_constant(&w.inner, p, &grid.inner).map_err(err)
}

#[pyfunction]
fn v_pdot_membership(w: &PyWeight, p: &PyExponent) -> PyResult<(bool, String)> {
    let rep = weights::v_pdot_membership(&w.inner, &p.inner).map_err(err)?;
    Ok((rep.member, rep.binding))
}

#[pyfunction]
fn hormander_sup(m: &PySymbol, space_dim: usize, s: f64) -> PyResult<f64> {
    Ok(operators::hormander_sobolev_norm(&m.inner, space_dim, s, None).map_err(err)?.sup)
}

/// Runs one experiment (e1..e9) with the default configuration and the
/// given seed; returns rows as (param_id, quantity, value, pass).
#[pyfunction]
#[pyo3(signature = (id, seed = 42))]
fn run_experiment(id: &str, seed: u64) -> PyResult<Vec<(String, String, f64, bool)>> {
    let mut cfg = HarnessConfig::default();
    cfg.seed = seed;
    let rep = vlmult::harness::run(id, &cfg).map_err(err)?;
    Ok(rep
        .rows
        .into_iter()
        .map(|r| (r.param_id, r.quantity, r.value, r.pass))
        .collect())
}

#[pymodule]
fn vlmult_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyFunction>()?;
    m.add_class::<PyExponent>()?;
    m.add_class::<PySymbol>()?;
    m.add_class::<PyWeight>()?;
    m.add_function(wrap_pyfunction!(forward_transform, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_transform, m)?)?;
    m.add_function(wrap_pyfunction!(luxemburg_norm, m)?)?;
    m.add_function(wrap_pyfunction!(norm, m)?)?;
    m.add_function(wrap_pyfunction!(modular, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_norm, m)?)?;
    m.add_function(wrap_pyfunction!(apply_linear, m)?)?;
    m.add_function(wrap_pyfunction!(apply_bilinear, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert, m)?)?;
    m.add_function(wrap_pyfunction!(bandlimit, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_g, m)?)?;
    m.add_function(wrap_pyfunction!(hl_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(multilinear_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(ap_constant, m)?)?;
    m.add_function(wrap_pyfunction!(v_pdot_membership, m)?)?;
    m.add_function(wrap_pyfunction!(hormander_sup, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
