//! Python bindings. Numbers cross the boundary as `fractions.Fraction`;
//! inputs may be anything `Fraction()` accepts, and `None` is an infinite
//! capacity.

use minflow::flowtheory;
use minflow::instance::{self, InstanceFile, RunOptions, RunStatus, Solver};
use minflow::oracle;
use minflow::reduce;
use minflow::{Balances, ExtRational, Flow, FlowError, Network, Rational};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

/// `(src, dst, capacity or None, cost)`.
type EdgeTuple<'py> = (usize, usize, Option<Bound<'py, PyAny>>, Bound<'py, PyAny>);

create_exception!(minflow, SolverError, PyException);

fn to_py(e: FlowError) -> PyErr {
    match e {
        FlowError::Internal(_) => SolverError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let fraction = obj.py().import("fractions")?.getattr("Fraction")?.call1((obj,))?;
    let numer: BigInt = fraction.getattr("numerator")?.extract()?;
    let denom: BigInt = fraction.getattr("denominator")?.extract()?;
    Ok(Rational::new(numer, denom))
}

fn fraction<'py>(py: Python<'py>, x: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((x.numer().clone(), x.denom().clone()))
}

fn fractions<'py>(py: Python<'py>, xs: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    xs.iter().map(|x| fraction(py, x)).collect()
}

fn rationals(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    objs.iter().map(rational).collect()
}

/// A directed network; vertices are `0..n`, edges keep their insertion order.
#[pyclass(name = "Network", frozen)]
struct PyNetwork {
    inner: Network,
}

#[pymethods]
impl PyNetwork {
    /// `edges` holds `(src, dst, capacity, cost)` tuples.
    #[new]
    fn new(vertex_count: usize, edges: Vec<EdgeTuple<'_>>) -> PyResult<Self> {
        let mut list = Vec::with_capacity(edges.len());
        for (src, dst, cap, cost) in edges {
            let cap = match cap {
                Some(c) => ExtRational::Finite(rational(&c)?),
                None => ExtRational::Infinity,
            };
            list.push((src, dst, cap, rational(&cost)?));
        }
        Ok(PyNetwork {
            inner: Network::new(vertex_count, list).map_err(to_py)?,
        })
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges<'py>(&self, py: Python<'py>) -> PyResult<Vec<EdgeTuple<'py>>> {
        self.inner
            .edges()
            .iter()
            .map(|e| {
                let cap = match self.inner.capacity(e.id) {
                    ExtRational::Finite(c) => Some(fraction(py, c)?),
                    ExtRational::Infinity => None,
                };
                Ok((e.src, e.dst, cap, fraction(py, self.inner.cost(e.id))?))
            })
            .collect()
    }

    fn flow_cost<'py>(&self, py: Python<'py>, flow: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let f = self.flow(&flow)?;
        fraction(py, &self.inner.flow_cost(&f))
    }

    fn is_feasible(&self, flow: Vec<Bound<'_, PyAny>>, balances: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        let f = self.flow(&flow)?;
        Ok(self.inner.is_feasible(&f, &Balances(rationals(&balances)?)))
    }

    /// Whether the flow is feasible and admits no negative residual cycle.
    fn verify_optimal(&self, flow: Vec<Bound<'_, PyAny>>, balances: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        let f = self.flow(&flow)?;
        Ok(flowtheory::verify_optimal(&self.inner, &f, &Balances(rationals(&balances)?)))
    }

    fn has_negative_infinite_cycle(&self) -> bool {
        reduce::has_neg_infty_cycle(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(vertices={}, edges={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

impl PyNetwork {
    fn flow(&self, values: &[Bound<'_, PyAny>]) -> PyResult<Flow> {
        if values.len() != self.inner.edge_count() {
            return Err(PyValueError::new_err(format!(
                "flow has {} values for {} edges",
                values.len(),
                self.inner.edge_count()
            )));
        }
        Ok(Flow(rationals(values)?))
    }
}

/// Outcome of `solve`.
#[pyclass(name = "Result", frozen, get_all)]
struct PySolveResult {
    /// `"success"`, `"infeasible"` or `"unbounded"`.
    status: String,
    cost: Option<Py<PyAny>>,
    flow: Option<Vec<Py<PyAny>>>,
    certified: bool,
    stats: Py<PyDict>,
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self, py: Python<'_>) -> PyResult<String> {
        let cost = match &self.cost {
            Some(c) => c.bind(py).str()?.to_string(),
            None => "None".into(),
        };
        Ok(format!("Result(status={}, cost={cost})", self.status))
    }
}

/// Solves with `"ssp"`, `"scaling"` or `"orlins"`.
#[pyfunction]
#[pyo3(signature = (network, balances, solver = "ssp", check = true, epsilon = None))]
fn solve(
    py: Python<'_>,
    network: &PyNetwork,
    balances: Vec<Bound<'_, PyAny>>,
    solver: &str,
    check: bool,
    epsilon: Option<Bound<'_, PyAny>>,
) -> PyResult<PySolveResult> {
    let solver: Solver = solver.parse().map_err(to_py)?;
    let inst = InstanceFile {
        net: network.inner.clone(),
        balances: Balances(rationals(&balances)?),
        name: None,
        comments: Vec::new(),
    };
    let opts = RunOptions {
        solver,
        check,
        oracle: false,
        epsilon: epsilon.as_ref().map(rational).transpose()?,
    };
    let report = instance::run(&inst, &opts).map_err(to_py)?;
    let stats = PyDict::new(py);
    for (k, v) in report.stats.entries() {
        stats.set_item(k, v)?;
    }
    let status = match report.status {
        RunStatus::Success => "success",
        RunStatus::Infeasible => "infeasible",
        RunStatus::Unbounded => "unbounded",
    };
    Ok(PySolveResult {
        status: status.into(),
        cost: report.cost.as_ref().map(|c| fraction(py, c).map(Bound::unbind)).transpose()?,
        flow: report
            .flow
            .as_ref()
            .map(|f| fractions(py, f.values()).map(|v| v.into_iter().map(Bound::unbind).collect()))
            .transpose()?,
        certified: report.certified,
        stats: stats.unbind(),
    })
}

/// Minimum cost by exhaustive search, or `None` if infeasible. Infinite
/// capacities need `cap_bound`.
#[pyfunction]
#[pyo3(signature = (network, balances, cap_bound = None))]
fn brute_force<'py>(
    py: Python<'py>,
    network: &PyNetwork,
    balances: Vec<Bound<'py, PyAny>>,
    cap_bound: Option<u64>,
) -> PyResult<Option<Bound<'py, PyAny>>> {
    let b = Balances(rationals(&balances)?);
    let r = oracle::brute_force_min_cost_flow(&network.inner, &b, cap_bound).map_err(to_py)?;
    r.cost().map(|c| fraction(py, c)).transpose()
}

/// Parses the text instance format into `(network, balances)`.
#[pyfunction]
fn parse_instance<'py>(py: Python<'py>, text: &str) -> PyResult<(PyNetwork, Vec<Bound<'py, PyAny>>)> {
    let inst = instance::parse_instance(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((PyNetwork { inner: inst.net }, fractions(py, inst.balances.values())?))
}

#[pyfunction]
#[pyo3(signature = (network, balances, name = None))]
fn render_instance(network: &PyNetwork, balances: Vec<Bound<'_, PyAny>>, name: Option<String>) -> PyResult<String> {
    Ok(instance::render_instance(&InstanceFile {
        net: network.inner.clone(),
        balances: Balances(rationals(&balances)?),
        name,
        comments: Vec::new(),
    }))
}

#[pymodule]
#[pyo3(name = "minflow")]
fn minflow_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNetwork>()?;
    m.add_class::<PySolveResult>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(parse_instance, m)?)?;
    m.add_function(wrap_pyfunction!(render_instance, m)?)?;
    m.add("SolverError", m.py().get_type::<SolverError>())?;
    Ok(())
}
