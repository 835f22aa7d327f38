//! Python bindings: cone orders, the set distance, the iteration engines,
//! and the integral-equation pipeline.
//!
//! Callables passed from Python drive the engines directly; a Python
//! exception raised mid-orbit aborts the run and propagates.

use std::cell::RefCell;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use conefix as cf;

fn to_py_err(e: cf::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_norm(name: &str) -> PyResult<cf::Norm> {
    name.parse().map_err(to_py_err)
}

fn termination_str(t: cf::Termination) -> &'static str {
    match t {
        cf::Termination::Converged => "converged",
        cf::Termination::MaxIter => "max_iter",
        cf::Termination::OrderViolation => "order_violation",
        cf::Termination::H1Violation => "h1_violation",
    }
}

/// Wraps a Python callable as a vector map, parking the first Python error
/// so it can be re-raised after the engine returns.
struct PyMap<'py> {
    callable: Bound<'py, PyAny>,
    dimension: usize,
    error: RefCell<Option<PyErr>>,
}

impl<'py> PyMap<'py> {
    fn new(callable: Bound<'py, PyAny>, dimension: usize) -> Self {
        PyMap {
            callable,
            dimension,
            error: RefCell::new(None),
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        if self.error.borrow().is_some() {
            return vec![f64::NAN; self.dimension];
        }
        let out = self
            .callable
            .call1((x.to_vec(),))
            .and_then(|r| r.extract::<Vec<f64>>());
        match out {
            Ok(v) => v,
            Err(e) => {
                *self.error.borrow_mut() = Some(e);
                // NaN iterates fail every order certificate, so the engine
                // stops promptly; the parked error wins afterwards.
                vec![f64::NAN; self.dimension]
            }
        }
    }

    fn take_error(&self) -> Option<PyErr> {
        self.error.borrow_mut().take()
    }
}

/// Cone descriptor inducing a partial order on R^n.
#[pyclass(frozen, name = "ConeOrder")]
struct PyConeOrder {
    inner: cf::ConeOrder,
}

#[pymethods]
impl PyConeOrder {
    /// Nonnegative orthant in the given dimension.
    #[staticmethod]
    fn orthant(dimension: usize) -> PyResult<Self> {
        Ok(PyConeOrder {
            inner: cf::ConeOrder::orthant(dimension).map_err(to_py_err)?,
        })
    }

    /// Weighted orthant; weights must be positive.
    #[staticmethod]
    fn weighted_orthant(weights: Vec<f64>) -> PyResult<Self> {
        Ok(PyConeOrder {
            inner: cf::ConeOrder::weighted_orthant(weights).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn is_lattice(&self) -> bool {
        self.inner.is_lattice()
    }

    fn membership(&self, x: Vec<f64>) -> PyResult<bool> {
        self.inner.membership(&x).map_err(to_py_err)
    }

    /// x ⪯ y under the cone order.
    fn leq(&self, x: Vec<f64>, y: Vec<f64>) -> PyResult<bool> {
        self.inner.leq(&x, &y).map_err(to_py_err)
    }

    fn interval_contains(
        &self,
        lower: Vec<f64>,
        upper: Vec<f64>,
        x: Vec<f64>,
    ) -> PyResult<bool> {
        let interval = cf::OrderInterval::new(lower, upper, self.inner.clone())
            .map_err(to_py_err)?;
        interval.contains(&x).map_err(to_py_err)
    }

    /// Greatest element of a finite chain; raises on an incomparable pair.
    fn chain_sup(&self, chain: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
        cf::chain_sup(&chain, &self.inner).map_err(to_py_err)
    }

    /// Sampled lower bound for the normal constant, plus the analytic value
    /// when one is known. Returns (lambda_lower_bound, analytic, samples_used).
    #[pyo3(signature = (norm="sup", samples=1000, seed=0))]
    fn estimate_normality(
        &self,
        norm: &str,
        samples: usize,
        seed: u64,
    ) -> PyResult<(f64, Option<f64>, usize)> {
        let est = cf::estimate_normality_constant(&self.inner, parse_norm(norm)?, samples, seed)
            .map_err(to_py_err)?;
        Ok((est.lambda_lower_bound, est.analytic_value, est.samples_used))
    }
}

/// Symmetric sup-inf distance between two finite point sets.
#[pyfunction]
#[pyo3(signature = (a, b, norm="sup"))]
fn delta(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>, norm: &str) -> PyResult<f64> {
    let n = parse_norm(norm)?;
    let pa = cf::PointSet::new(a, n).map_err(to_py_err)?;
    let pb = cf::PointSet::new(b, n).map_err(to_py_err)?;
    cf::delta(&pa, &pb).map_err(to_py_err)
}

/// Distance of x to a finite point set; zero exactly when x is a member.
#[pyfunction]
#[pyo3(signature = (x, points, norm="sup"))]
fn membership_residual(x: Vec<f64>, points: Vec<Vec<f64>>, norm: &str) -> PyResult<f64> {
    let s = cf::PointSet::new(points, parse_norm(norm)?).map_err(to_py_err)?;
    cf::membership_residual(&x, &s).map_err(to_py_err)
}

fn fixed_point_dict<'py>(
    py: Python<'py>,
    result: &cf::FixedPointResult,
) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("point", result.point.clone())?;
    dict.set_item("residual", result.residual)?;
    dict.set_item("above_start", result.above_start)?;
    dict.set_item("iterations", result.trace.steps())?;
    dict.set_item("terminated_by", termination_str(result.trace.terminated_by))?;
    dict.set_item("iterates", result.trace.iterates.clone())?;
    Ok(dict)
}

/// Increasing iteration x_{n+1} = f(x_n) from x0 (requires x0 ⪯ f(x0)).
#[pyfunction]
#[pyo3(signature = (f, x0, tol=1e-10, max_iter=1000))]
fn iterate_increasing<'py>(
    py: Python<'py>,
    f: Bound<'py, PyAny>,
    x0: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let cone = cf::ConeOrder::orthant(x0.len().max(1)).map_err(to_py_err)?;
    let map = PyMap::new(f, x0.len());
    let outcome = cf::iterate_increasing(|x: &[f64]| map.apply(x), &x0, &cone, tol, max_iter);
    if let Some(err) = map.take_error() {
        return Err(err);
    }
    fixed_point_dict(py, &outcome.map_err(to_py_err)?)
}

/// Decreasing iteration x_{n+1} = f(x_n) from the origin of the orthant.
#[pyfunction]
#[pyo3(signature = (f, dimension, tol=1e-10, max_iter=1000))]
fn iterate_decreasing<'py>(
    py: Python<'py>,
    f: Bound<'py, PyAny>,
    dimension: usize,
    tol: f64,
    max_iter: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let cone = cf::ConeOrder::orthant(dimension).map_err(to_py_err)?;
    let map = PyMap::new(f, dimension);
    let outcome = cf::iterate_decreasing(|x: &[f64]| map.apply(x), &cone, tol, max_iter);
    if let Some(err) = map.take_error() {
        return Err(err);
    }
    let result = outcome.map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("point", result.point.clone())?;
    dict.set_item("even_limit", result.even_limit.clone())?;
    dict.set_item("odd_limit", result.odd_limit.clone())?;
    dict.set_item("h1_gap", result.h1_gap)?;
    dict.set_item("iterations", result.trace.steps())?;
    dict.set_item("terminated_by", termination_str(result.trace.terminated_by))?;
    Ok(dict)
}

/// Exact Fix(F²) = Fix(F) vs 2-cycle report for a finite self-map given by
/// its image table.
#[pyfunction]
fn check_h2<'py>(py: Python<'py>, images: Vec<usize>) -> PyResult<Bound<'py, PyDict>> {
    let map = cf::FiniteSelfMap::new(images).map_err(to_py_err)?;
    let report = cf::check_h2_equivalence(&map);
    let dict = PyDict::new(py);
    dict.set_item("fixed_points", report.fixed_points)?;
    dict.set_item("fixed_points_f2", report.fixed_points_f2)?;
    dict.set_item("two_cycles", report.two_cycles)?;
    dict.set_item("h1_holds", report.h1_holds)?;
    dict.set_item("h2_holds", report.h2_holds)?;
    dict.set_item("equivalent", report.equivalent)?;
    Ok(dict)
}

/// Solve the singular integral equation for a builtin kernel
/// (zero, separable_unit, separable_linear, constant_one).
#[pyfunction]
#[pyo3(signature = (kernel, grid_size=257, tol=1e-10, max_iter=1000, override_validation=false))]
fn solve_integral<'py>(
    py: Python<'py>,
    kernel: &str,
    grid_size: usize,
    tol: f64,
    max_iter: usize,
    override_validation: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let problem = cf::registry::kernel_problem(kernel, grid_size).map_err(to_py_err)?;
    let solution = cf::solve(&problem, tol, max_iter, override_validation).map_err(to_py_err)?;
    let nodes: Vec<f64> = (0..solution.psi.len()).map(|i| solution.psi.node(i)).collect();
    let dict = PyDict::new(py);
    dict.set_item("x", nodes)?;
    dict.set_item("psi", solution.psi.values().to_vec())?;
    dict.set_item("Psi", solution.big_psi.values().to_vec())?;
    dict.set_item("g", solution.g.values().to_vec())?;
    dict.set_item("residual", solution.residual)?;
    dict.set_item("analytic_gap", solution.analytic_gap)?;
    dict.set_item("iterations", solution.iterations)?;
    dict.set_item(
        "terminated_by",
        termination_str(solution.engine.trace.terminated_by),
    )?;
    Ok(dict)
}

#[pymodule]
fn conefix_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConeOrder>()?;
    m.add_function(wrap_pyfunction!(delta, m)?)?;
    m.add_function(wrap_pyfunction!(membership_residual, m)?)?;
    m.add_function(wrap_pyfunction!(iterate_increasing, m)?)?;
    m.add_function(wrap_pyfunction!(iterate_decreasing, m)?)?;
    m.add_function(wrap_pyfunction!(check_h2, m)?)?;
    m.add_function(wrap_pyfunction!(solve_integral, m)?)?;
    Ok(())
}
