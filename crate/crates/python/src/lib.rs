//! Python bindings: load cases, evaluate dispatches, run the optimizer and
//! the compromise selection, and compute front metrics.

use std::collections::HashMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use chpeed::casedata::write_archive;
use chpeed::metrics;
use chpeed::model::{Dispatch, DispatchCase, DispatchSolution, IntervalProblem};
use chpeed::{Algorithm, RunConfig};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_error(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn solution_dict(s: &DispatchSolution) -> HashMap<&'static str, PyDispatchValue> {
    let d = &s.dispatch;
    HashMap::from([
        ("cost", PyDispatchValue::Scalar(s.cost)),
        ("emission", PyDispatchValue::Scalar(s.emission)),
        ("loss", PyDispatchValue::Scalar(s.loss)),
        ("power_residual", PyDispatchValue::Scalar(s.report.power_residual)),
        ("heat_residual", PyDispatchValue::Scalar(s.report.heat_residual)),
        ("feasible", PyDispatchValue::Flag(s.is_feasible())),
        ("power", PyDispatchValue::Vector(d.power.clone())),
        ("chp_power", PyDispatchValue::Vector(d.chp_power.clone())),
        ("chp_heat", PyDispatchValue::Vector(d.chp_heat.clone())),
        ("heat", PyDispatchValue::Vector(d.heat.clone())),
    ])
}

#[derive(IntoPyObject)]
enum PyDispatchValue {
    Scalar(f64),
    Flag(bool),
    Vector(Vec<f64>),
}

/// A dispatch case (units, demands and loss model).
#[pyclass(name = "Case", frozen)]
struct PyCase {
    inner: DispatchCase,
}

#[pymethods]
impl PyCase {
    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn n_intervals(&self) -> usize {
        self.inner.n_intervals()
    }

    /// `(power-only, cogeneration, heat-only)` unit counts.
    #[getter]
    fn unit_counts(&self) -> (usize, usize, usize) {
        (self.inner.power_units.len(), self.inner.chp_units.len(), self.inner.heat_units.len())
    }

    #[getter]
    fn power_demand(&self) -> Vec<f64> {
        self.inner.power_demand.clone()
    }

    #[getter]
    fn heat_demand(&self) -> Vec<f64> {
        self.inner.heat_demand.clone()
    }

    /// Reasons why the interval cannot be satisfied (empty when feasible).
    #[pyo3(signature = (interval=0))]
    fn infeasibility(&self, interval: usize) -> PyResult<Vec<String>> {
        if interval >= self.inner.n_intervals() {
            return Err(value_error(format!("interval {interval} out of range")));
        }
        Ok(self.inner.infeasibility(interval))
    }

    /// Evaluate a dispatch as given (no repair).
    #[pyo3(signature = (power, chp_power, chp_heat, heat, interval=0))]
    fn evaluate(
        &self,
        power: Vec<f64>,
        chp_power: Vec<f64>,
        chp_heat: Vec<f64>,
        heat: Vec<f64>,
        interval: usize,
    ) -> PyResult<HashMap<&'static str, PyDispatchValue>> {
        let problem = IntervalProblem::new(&self.inner, interval).map_err(value_error)?;
        let d = Dispatch { power, chp_power, chp_heat, heat };
        let s = problem.evaluate(d).map_err(value_error)?;
        Ok(solution_dict(&s))
    }

    fn __repr__(&self) -> String {
        let (p, c, h) = self.unit_counts();
        format!("Case(name={:?}, power_units={p}, chp_units={c}, heat_units={h})", self.inner.name)
    }
}

/// Archive and compromise selection of one static solve.
#[pyclass(name = "SolveResult", frozen)]
struct PySolveResult {
    case: DispatchCase,
    solved: chpeed::Solved,
    title: String,
}

#[pymethods]
impl PySolveResult {
    /// `(cost, emission)` of every archive member, ascending cost.
    #[getter]
    fn front(&self) -> Vec<(f64, f64)> {
        self.solved.archive.front().into_iter().map(|[c, e]| (c, e)).collect()
    }

    fn __len__(&self) -> usize {
        self.solved.archive.len()
    }

    /// Compromise solutions, one dict per cluster (BCS 1 first).
    fn bcs(&self) -> Vec<HashMap<&'static str, PyDispatchValue>> {
        self.solved.report.best_solutions().into_iter().map(solution_dict).collect()
    }

    fn archive_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        write_archive(self.solved.archive.solutions(), &mut buf).map_err(runtime_error)?;
        String::from_utf8(buf).map_err(runtime_error)
    }

    fn report_text(&self) -> String {
        self.solved.report.to_text(&self.case, &self.title)
    }

    fn report_json(&self) -> String {
        self.solved.report.to_json()
    }
}

/// Load a case file, or one of the shipped cases by name (`case1`, `case2`).
#[pyfunction]
fn load_case(path: &str) -> PyResult<PyCase> {
    chpeed::load_case(path).map(|inner| PyCase { inner }).map_err(value_error)
}

/// Optimize the first interval and select the best compromise solutions.
#[pyfunction]
#[pyo3(signature = (case, seed=0, population_size=100, max_iterations=100, algorithm="theta-dea", theta=5.0))]
fn solve(
    py: Python<'_>,
    case: &PyCase,
    seed: u64,
    population_size: usize,
    max_iterations: usize,
    algorithm: &str,
    theta: f64,
) -> PyResult<PySolveResult> {
    let algorithm: Algorithm = algorithm.parse().map_err(value_error)?;
    let config = RunConfig { algorithm, population_size, max_iterations, seed, theta, ..RunConfig::default() };
    let case = case.inner.clone();
    let solved = py.detach(|| chpeed::solve(&case, &config)).map_err(runtime_error)?;
    let title = format!("{} ({algorithm}, seed {seed})", case.name);
    Ok(PySolveResult { case, solved, title })
}

/// Inverted generational distance of `front` against `reference`.
#[pyfunction]
fn igd(reference: Vec<[f64; 2]>, front: Vec<[f64; 2]>) -> PyResult<f64> {
    metrics::igd(&reference, &front).map_err(value_error)
}

/// Spread of `front` against the two extreme points.
#[pyfunction]
fn spread(front: Vec<[f64; 2]>, extremes: [[f64; 2]; 2]) -> PyResult<f64> {
    metrics::spread(&front, extremes).map(|s| s.value).map_err(value_error)
}

/// Simplex-lattice reference directions.
#[pyfunction]
#[pyo3(signature = (divisions, n_objectives=2))]
fn das_dennis_points(divisions: usize, n_objectives: usize) -> PyResult<Vec<Vec<f64>>> {
    chpeed::optimizer::das_dennis_points(divisions, n_objectives)
        .map(|r| r.points().to_vec())
        .map_err(value_error)
}

#[pymodule]
fn chpeed_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCase>()?;
    m.add_class::<PySolveResult>()?;
    m.add_function(wrap_pyfunction!(load_case, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(igd, m)?)?;
    m.add_function(wrap_pyfunction!(spread, m)?)?;
    m.add_function(wrap_pyfunction!(das_dennis_points, m)?)?;
    Ok(())
}
