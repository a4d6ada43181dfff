//! Python module `ccs`: processes, contexts, transition systems, relation
//! checks, unique-solution reports and the property suite.

use std::collections::BTreeMap;

use ccs_core::context::Context;
use ccs_core::solutions::{solution_report, SolutionReport, Variant};
use ccs_core::suite::{run_all, PropertyReport, SuiteConfig};
use ccs_core::{Error, Lts, Process, RelationKind, Verdict};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(ccs, CcsError, PyException, "Raised for syntax, budget and precondition errors.");

const DEFAULT_MAX_STATES: usize = 10_000;

fn err(e: Error) -> PyErr {
    CcsError::new_err(e.to_string())
}

/// A CCS process.
#[pyclass(name = "Process", module = "ccs", frozen, eq, hash, str, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyProcess(Process);

impl std::fmt::Display for PyProcess {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A `Process` or the text of one.
fn process_arg(obj: &Bound<'_, PyAny>) -> PyResult<Process> {
    if let Ok(p) = obj.cast::<PyProcess>() {
        return Ok(p.get().0.clone());
    }
    let text: String = obj.extract()?;
    Process::parse(&text).map_err(err)
}

#[pymethods]
impl PyProcess {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Process::parse(text).map(PyProcess).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Process({:?})", self.0.to_string())
    }

    /// One-step transitions as `(action, target)` pairs.
    fn transitions(&self) -> PyResult<Vec<(String, PyProcess)>> {
        let moves = ccs_core::step(&self.0).map_err(err)?;
        Ok(moves.into_iter().map(|(u, q)| (u.to_string(), PyProcess(q))).collect())
    }

    fn canonical(&self) -> PyProcess {
        PyProcess(self.0.canonical())
    }

    fn free_variables(&self) -> Vec<String> {
        self.0.free_variables().iter().map(|n| n.to_string()).collect()
    }

    fn size(&self) -> usize {
        self.0.size()
    }
}

/// A context with holes written `_`.
#[pyclass(name = "Context", module = "ccs", frozen, eq, hash, str, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyContext(Context);

impl std::fmt::Display for PyContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

fn context_arg(obj: &Bound<'_, PyAny>) -> PyResult<Context> {
    if let Ok(c) = obj.cast::<PyContext>() {
        return Ok(c.get().0.clone());
    }
    let text: String = obj.extract()?;
    Context::parse(&text).map_err(err)
}

#[pymethods]
impl PyContext {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Context::parse(text).map(PyContext).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Context({:?})", self.0.to_string())
    }

    /// Membership in each context class.
    fn classify(&self) -> BTreeMap<String, bool> {
        self.0.classify().flags().iter().map(|(n, b)| (n.to_string(), *b)).collect()
    }

    /// Fills every hole with `p`.
    fn apply(&self, p: &Bound<'_, PyAny>) -> PyResult<PyProcess> {
        self.0.apply(&process_arg(p)?).map(PyProcess).map_err(err)
    }

    fn compose(&self, inner: &Bound<'_, PyAny>) -> PyResult<PyContext> {
        Ok(PyContext(self.0.compose(&context_arg(inner)?)))
    }

    fn has_hole(&self) -> bool {
        self.0.has_hole()
    }
}

/// The reachable transition system of a process.
#[pyclass(name = "Lts", module = "ccs", frozen)]
struct PyLts(Lts);

#[pymethods]
impl PyLts {
    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn root(&self) -> usize {
        self.0.root()
    }

    fn states(&self) -> Vec<String> {
        self.0.states().map(|(_, p)| p.to_string()).collect()
    }

    /// `(source, action, target)` triples.
    fn edges(&self) -> Vec<(usize, String, usize)> {
        self.0.edges().map(|(s, u, t)| (s, u.to_string(), t)).collect()
    }

    fn to_dot(&self) -> String {
        ccs_core::lts::to_dot(&self.0)
    }
}

/// Outcome of a relation check.
#[pyclass(name = "Verdict", module = "ccs", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyVerdict {
    relation: String,
    holds: bool,
    witness: Option<Vec<(usize, usize)>>,
    distinguisher: Option<String>,
}

impl From<&Verdict> for PyVerdict {
    fn from(v: &Verdict) -> PyVerdict {
        PyVerdict {
            relation: v.kind.name().to_string(),
            holds: v.holds,
            witness: v.witness.as_ref().map(|w| w.pairs().collect()),
            distinguisher: v.distinguisher.as_ref().map(|d| d.to_string()),
        }
    }
}

#[pymethods]
impl PyVerdict {
    fn __bool__(&self) -> bool {
        self.holds
    }

    fn __repr__(&self) -> String {
        format!("Verdict(relation={:?}, holds={})", self.relation, if self.holds { "True" } else { "False" })
    }
}

/// Hypothesis checks and conclusion of a unique-solution instance.
#[pyclass(name = "SolutionReport", module = "ccs", frozen, get_all)]
struct PySolutionReport {
    variant: String,
    theorem: String,
    checks: Vec<(String, bool)>,
    conclusion: Option<PyVerdict>,
    guarantee_met: bool,
}

impl From<SolutionReport> for PySolutionReport {
    fn from(r: SolutionReport) -> PySolutionReport {
        PySolutionReport {
            variant: r.variant.name().to_string(),
            theorem: r.theorem.to_string(),
            guarantee_met: r.guarantee_met(),
            conclusion: r.conclusion.as_ref().map(PyVerdict::from),
            checks: r.hypothesis_checks,
        }
    }
}

#[pymethods]
impl PySolutionReport {
    fn __repr__(&self) -> String {
        format!("SolutionReport(variant={:?}, guarantee_met={})", self.variant, if self.guarantee_met { "True" } else { "False" })
    }
}

/// Result of one randomized property.
#[pyclass(name = "PropertyReport", module = "ccs", frozen, get_all)]
struct PyPropertyReport {
    name: String,
    cases: usize,
    passed: usize,
    skipped: usize,
    failures: Vec<String>,
}

impl From<PropertyReport> for PyPropertyReport {
    fn from(r: PropertyReport) -> PyPropertyReport {
        PyPropertyReport { name: r.name, cases: r.cases, passed: r.passed, skipped: r.skipped, failures: r.failures }
    }
}

#[pymethods]
impl PyPropertyReport {
    fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn __repr__(&self) -> String {
        format!("PropertyReport({:?}, passed={}/{})", self.name, self.passed, self.cases)
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<PyProcess> {
    PyProcess::new(text)
}

#[pyfunction]
fn step(p: &Bound<'_, PyAny>) -> PyResult<Vec<(String, PyProcess)>> {
    PyProcess(process_arg(p)?).transitions()
}

#[pyfunction]
#[pyo3(signature = (p, max_states = DEFAULT_MAX_STATES))]
fn explore(p: &Bound<'_, PyAny>, max_states: usize) -> PyResult<PyLts> {
    ccs_core::explore(&process_arg(p)?, max_states).map(PyLts).map_err(err)
}

/// Decides `relation` (`strong`, `weak`, `rooted`, `expansion`,
/// `contraction` or `rooted-contraction`) between `p` and `q`.
#[pyfunction]
#[pyo3(signature = (relation, p, q, max_states = DEFAULT_MAX_STATES))]
fn check(relation: &str, p: &Bound<'_, PyAny>, q: &Bound<'_, PyAny>, max_states: usize) -> PyResult<PyVerdict> {
    let kind: RelationKind = relation.parse().map_err(err)?;
    let v = ccs_core::check(kind, &process_arg(p)?, &process_arg(q)?, max_states).map_err(err)?;
    Ok(PyVerdict::from(&v))
}

#[pyfunction]
fn classify(context: &Bound<'_, PyAny>) -> PyResult<BTreeMap<String, bool>> {
    Ok(PyContext(context_arg(context)?).classify())
}

/// Checks the hypotheses of a unique-solution variant (`strong`, `weak`,
/// `rooted`, `contraction`, `rooted-contraction`) and, when they hold, its
/// conclusion between `p` and `q`.
#[pyfunction]
#[pyo3(signature = (variant, body, p, q, max_states = DEFAULT_MAX_STATES))]
fn unique_solution(
    variant: &str,
    body: &Bound<'_, PyAny>,
    p: &Bound<'_, PyAny>,
    q: &Bound<'_, PyAny>,
    max_states: usize,
) -> PyResult<PySolutionReport> {
    let variant: Variant = variant.parse().map_err(err)?;
    let report =
        solution_report(variant, &context_arg(body)?, &process_arg(p)?, &process_arg(q)?, max_states).map_err(err)?;
    Ok(report.into())
}

#[pyfunction]
#[pyo3(signature = (seed = 42, cases = 20, max_states = 2000))]
fn run_suite(py: Python<'_>, seed: u64, cases: usize, max_states: usize) -> Vec<PyPropertyReport> {
    let cfg = SuiteConfig { seed, cases, max_states, ..SuiteConfig::default() };
    py.detach(|| run_all(&cfg)).into_iter().map(PyPropertyReport::from).collect()
}

#[pymodule]
fn ccs(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CcsError", m.py().get_type::<CcsError>())?;
    m.add_class::<PyProcess>()?;
    m.add_class::<PyContext>()?;
    m.add_class::<PyLts>()?;
    m.add_class::<PyVerdict>()?;
    m.add_class::<PySolutionReport>()?;
    m.add_class::<PyPropertyReport>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(step, m)?)?;
    m.add_function(wrap_pyfunction!(explore, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(unique_solution, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
