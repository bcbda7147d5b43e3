//! Python bindings: states, basis sets, the closed-form solvers, the oracle,
//! three-gate decomposition and the uncertainty reports.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use blochapprox::analytic::{self, WeightFamily};
use blochapprox::gates::{self, BasisSet};
use blochapprox::oracle;
use blochapprox::qubit::QubitState;
use blochapprox::uncertainty::{self, UncertaintyReport};

fn py_err(e: blochapprox::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "QubitState", frozen, from_py_object)]
#[derive(Clone)]
struct PyQubitState(QubitState);

#[pymethods]
impl PyQubitState {
    #[new]
    #[pyo3(signature = (a, k, phi = 0.0))]
    fn new(a: f64, k: f64, phi: f64) -> PyResult<Self> {
        QubitState::new(a, k, phi).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn from_bloch(x: f64, y: f64, z: f64) -> PyResult<Self> {
        QubitState::from_bloch(blochapprox::qubit::Bloch::new(x, y, z)).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn maximally_mixed() -> Self {
        Self(QubitState::maximally_mixed())
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a()
    }

    #[getter]
    fn k(&self) -> f64 {
        self.0.k()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi()
    }

    #[getter]
    fn bloch(&self) -> (f64, f64, f64) {
        let r = self.0.bloch();
        (r.x, r.y, r.z)
    }

    fn is_canonical(&self) -> bool {
        self.0.is_canonical()
    }

    fn __repr__(&self) -> String {
        format!("QubitState(a={}, k={}, phi={})", self.0.a(), self.0.k(), self.0.phi())
    }
}

#[pyclass(name = "BasisSet", frozen, from_py_object)]
#[derive(Clone)]
struct PyBasisSet(BasisSet);

#[pymethods]
impl PyBasisSet {
    #[staticmethod]
    fn s_prime(theta: f64) -> PyResult<Self> {
        BasisSet::s_prime(theta).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn s_double_prime(vartheta: f64) -> PyResult<Self> {
        BasisSet::s_double_prime(vartheta).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn s_triple_prime(theta: f64) -> PyResult<Self> {
        BasisSet::s_triple_prime(theta).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn s1(alpha: f64, beta: f64) -> PyResult<Self> {
        BasisSet::s1(alpha, beta).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn s2(beta: f64) -> PyResult<Self> {
        BasisSet::s2(beta).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn s3(alpha: f64) -> PyResult<Self> {
        BasisSet::s3(alpha).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn three_gate(alpha: f64, beta: f64) -> PyResult<Self> {
        BasisSet::three_gate(alpha, beta).map(Self).map_err(py_err)
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    #[getter]
    fn blochs(&self) -> Vec<(f64, f64, f64)> {
        self.0.blochs().iter().map(|r| (r.x, r.y, r.z)).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("BasisSet({})", self.0.label())
    }
}

/// Closed-form solution with its full family of optimal weights.
#[pyclass(name = "ApproxResult", frozen)]
struct PyApproxResult {
    #[pyo3(get)]
    distance: f64,
    #[pyo3(get)]
    case: String,
    #[pyo3(get)]
    mu: Option<f64>,
    #[pyo3(get)]
    nu: Option<f64>,
    family: WeightFamily,
}

#[pymethods]
impl PyApproxResult {
    /// Weights with every free parameter at zero.
    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.family.representative().to_vec()
    }

    /// `(name, min, max)` per free parameter.
    #[getter]
    fn free_params(&self) -> Vec<(String, f64, f64)> {
        self.family.free_params().iter().map(|p| (p.name.clone(), p.min, p.max)).collect()
    }

    #[getter]
    fn sum_cap(&self) -> Option<f64> {
        self.family.sum_cap()
    }

    /// Weights at the given free-parameter values.
    fn evaluate(&self, params: Vec<f64>) -> PyResult<Vec<f64>> {
        self.family.evaluate(&params).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("ApproxResult(case={}, distance={})", self.case, self.distance)
    }
}

impl From<analytic::ApproxResult> for PyApproxResult {
    fn from(r: analytic::ApproxResult) -> Self {
        Self { distance: r.distance, case: r.case.to_string(), mu: r.mu, nu: r.nu, family: r.weights }
    }
}

#[pyclass(name = "OracleSolution", frozen, get_all)]
struct PyOracleSolution {
    distance: f64,
    weights: Vec<f64>,
    active_support: Vec<usize>,
    kkt_residual: f64,
}

#[pyfunction]
fn solve_type1(state: &PyQubitState, theta: f64) -> PyResult<PyApproxResult> {
    analytic::solve_type1(&state.0, theta).map(Into::into).map_err(py_err)
}

#[pyfunction]
fn solve_type2(state: &PyQubitState, vartheta: f64) -> PyResult<PyApproxResult> {
    analytic::solve_type2(&state.0, vartheta).map(Into::into).map_err(py_err)
}

/// Exact projection onto the convex hull of the basis.
#[pyfunction]
fn oracle_solve(state: &PyQubitState, set: &PyBasisSet) -> PyResult<PyOracleSolution> {
    let s = oracle::solve(&state.0, &set.0).map_err(py_err)?;
    Ok(PyOracleSolution {
        distance: s.distance,
        weights: s.weights,
        active_support: s.active_support,
        kkt_residual: s.kkt_residual,
    })
}

/// Reduced state and canonical set with the same approximation problem.
#[pyfunction]
fn reduce_problem(state: &PyQubitState, set: &PyBasisSet) -> PyResult<(PyQubitState, PyBasisSet)> {
    let red = gates::reduce_problem(&state.0, &set.0).map_err(py_err)?;
    Ok((PyQubitState(red.state), PyBasisSet(red.set)))
}

#[pyfunction]
#[pyo3(signature = (state, theta = None))]
fn decompose<'py>(py: Python<'py>, state: &PyQubitState, theta: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
    let d = analytic::decompose_three_gates(&state.0, theta).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("decomposable", d.decomposable)?;
    out.set_item("criterion_lhs", d.criterion_lhs)?;
    out.set_item("criterion_rhs", d.criterion_rhs)?;
    out.set_item("theta_interval", d.tan_interval.map(|t| t.theta_bounds()))?;
    out.set_item("theta", d.theta)?;
    out.set_item("decomposable_at_theta", d.decomposable_at_theta)?;
    out.set_item("weights", d.weights.as_ref().map(|w| w.representative().to_vec()))?;
    out.set_item("sum_cap", d.weights.as_ref().and_then(WeightFamily::sum_cap))?;
    Ok(out)
}

fn report_dict<'py>(py: Python<'py>, r: &UncertaintyReport) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    let fields = [
        ("d_sx", Some(r.d_sx)),
        ("d_sy", Some(r.d_sy)),
        ("d_sz", Some(r.d_sz)),
        ("abs_sx", Some(r.abs_sx)),
        ("abs_sy", Some(r.abs_sy)),
        ("abs_sz", Some(r.abs_sz)),
        ("triple_lhs", Some(r.triple_lhs)),
        ("triple_rhs", Some(r.triple_rhs)),
        ("f1", Some(r.f1)),
        ("f2", Some(r.f2)),
        ("theta", r.theta),
        ("vartheta", r.vartheta),
        ("m0", r.m0),
        ("m1", r.m1),
        ("m2", r.m2),
        ("equality_lhs", r.equality_lhs),
        ("equality_rhs", r.equality_rhs),
    ];
    for (k, v) in fields {
        out.set_item(k, v)?;
    }
    out.set_item("applicable", r.applicable)?;
    Ok(out)
}

/// Spin variances and triple-relation terms; the equality form needs both angles.
#[pyfunction]
#[pyo3(signature = (state, theta = None, vartheta = None))]
fn uncertainty_report<'py>(
    py: Python<'py>,
    state: &PyQubitState,
    theta: Option<f64>,
    vartheta: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = match (theta, vartheta) {
        (Some(t), Some(v)) => uncertainty::equality_relation(&state.0, t, v),
        (None, None) => uncertainty::report(&state.0),
        _ => return Err(PyValueError::new_err("pass both theta and vartheta, or neither")),
    };
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (grid_k = 512, grid_a = 512))]
fn lambda_scan(grid_k: usize, grid_a: usize) -> (f64, f64, f64) {
    let s = uncertainty::lambda_scan(grid_k, grid_a);
    (s.lambda, s.k, s.a)
}

type Intervals = Vec<(f64, f64)>;

/// `(theta intervals, vartheta intervals)` where the interior cases hold.
#[pyfunction]
#[pyo3(signature = (state, grid = 1000))]
fn validity_ranges(state: &PyQubitState, grid: usize) -> (Intervals, Intervals) {
    let r = uncertainty::validity_ranges(&state.0, grid);
    let pairs = |v: &[uncertainty::AngleInterval]| v.iter().map(|i| (i.lo, i.hi)).collect();
    (pairs(&r.theta), pairs(&r.vartheta))
}

#[pymodule]
#[pyo3(name = "blochapprox")]
fn blochapprox_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQubitState>()?;
    m.add_class::<PyBasisSet>()?;
    m.add_class::<PyApproxResult>()?;
    m.add_class::<PyOracleSolution>()?;
    m.add_function(wrap_pyfunction!(solve_type1, m)?)?;
    m.add_function(wrap_pyfunction!(solve_type2, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_solve, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_problem, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(uncertainty_report, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_scan, m)?)?;
    m.add_function(wrap_pyfunction!(validity_ranges, m)?)?;
    m.add("TRIPLE_CONSTANT", uncertainty::TRIPLE_CONSTANT)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_functions_run_under_the_interpreter() {
        Python::initialize();
        Python::attach(|py| {
            let state = PyQubitState::new(0.5, 1.0, 0.0).unwrap();
            let res = solve_type1(&state, std::f64::consts::FRAC_PI_3).unwrap();
            assert_eq!(res.case, "I_ii");
            assert!((res.distance - 0.366_025_403_784_438_6).abs() < 1e-12);
            let set = PyBasisSet::s_prime(std::f64::consts::FRAC_PI_3).unwrap();
            assert!((oracle_solve(&state, &set).unwrap().distance - res.distance).abs() < 1e-12);
            let report = uncertainty_report(py, &state, None, None).unwrap();
            assert!(report.get_item("triple_lhs").unwrap().is_some());
            assert!(uncertainty_report(py, &state, Some(0.3), None).is_err());
            assert!(PyQubitState::new(0.5, 2.0, 0.0).is_err());
        });
    }
}
