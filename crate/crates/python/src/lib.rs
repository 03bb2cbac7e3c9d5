//! Python bindings. Equation sets, queries and programs cross the boundary
//! as source text; results come back as plain Python values or [`PyTrace`].

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use occur_core::corpus;
use occur_core::iterms;
use occur_core::mma::{self, OcfSearch, StrategyKind, Trace, DEFAULT_FUEL, DEFAULT_STATE_BOUND};
use occur_core::mma_minus::{self, Mode};
use occur_core::parser::{parse_equations, parse_program, parse_query};
use occur_core::sld::{self, DeriveOptions, Engine, SelectionRule, Traversal};
use occur_core::terms::EquationSet;
use occur_core::theorem::{run_suite, SuiteConfig};
use occur_core::trace::TraceDocument;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn eqs(text: &str) -> PyResult<EquationSet> {
    parse_equations(text).map_err(value_err)
}

/// A finished run of MMA or its occur-check-free variant.
#[pyclass(name = "Trace", frozen)]
struct PyTrace {
    inner: Trace,
}

#[pymethods]
impl PyTrace {
    #[getter]
    fn status(&self) -> &'static str {
        self.inner.outcome.label()
    }

    #[getter]
    fn initial(&self) -> String {
        self.inner.initial.to_string()
    }

    #[getter]
    fn final_state(&self) -> String {
        self.inner.final_eqs().to_string()
    }

    /// `(action number, equation set after the step)` pairs.
    #[getter]
    fn steps(&self) -> Vec<(String, String)> {
        self.inner
            .steps
            .iter()
            .map(|s| (s.action.kind.number().to_string(), s.after.to_string()))
            .collect()
    }

    #[getter]
    fn mgu(&self) -> Option<String> {
        self.inner.mgu().map(|m| m.to_string())
    }

    fn to_json(&self, seed: u64) -> String {
        TraceDocument::from_trace(Vec::new(), seed, &self.inner).without_timing().to_json()
    }

    fn __len__(&self) -> usize {
        self.inner.steps.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("<Trace {} steps, {}>", self.inner.steps.len(), self.inner.outcome.label())
    }
}

/// Canonical rendering of an equation set.
#[pyfunction]
fn normalize(text: &str) -> PyResult<String> {
    Ok(eqs(text)?.to_string())
}

#[pyfunction]
#[pyo3(signature = (text, algo = "mma", strategy = "leftmost", mode = "restricted", fuel = DEFAULT_FUEL))]
fn unify(text: &str, algo: &str, strategy: &str, mode: &str, fuel: usize) -> PyResult<PyTrace> {
    let e = eqs(text)?;
    let mut s = strategy.parse::<StrategyKind>().map_err(value_err)?.build();
    let inner = match algo {
        "mma" => mma::run(&e, &mut s, fuel),
        "mma-minus" => mma_minus::run_minus(&e, &mut s, mode.parse::<Mode>().map_err(value_err)?, fuel),
        other => return Err(value_err(format!("unknown algorithm `{other}`"))),
    };
    Ok(PyTrace { inner })
}

#[pyfunction]
#[pyo3(signature = (text, bound = DEFAULT_STATE_BOUND))]
fn is_nsto(text: &str, bound: usize) -> PyResult<&'static str> {
    Ok(mma::is_nsto(&eqs(text)?, bound).label())
}

/// A witness run avoiding the occur-check, `None` if there is none.
/// Raises when the search bound is exhausted.
#[pyfunction]
#[pyo3(signature = (text, bound = DEFAULT_STATE_BOUND))]
fn ocf_run(text: &str, bound: usize) -> PyResult<Option<PyTrace>> {
    match mma::exists_ocf_run(&eqs(text)?, bound) {
        OcfSearch::Found(inner) => Ok(Some(PyTrace { inner })),
        OcfSearch::None => Ok(None),
        OcfSearch::Unknown => Err(value_err("search bound exhausted")),
    }
}

#[pyfunction]
fn is_semi_solved(text: &str) -> PyResult<bool> {
    Ok(mma_minus::is_semi_solved(&eqs(text)?))
}

#[pyfunction]
#[pyo3(signature = (a, b, depth = iterms::DEFAULT_DEPTH))]
fn i_equivalent(a: &str, b: &str, depth: usize) -> PyResult<bool> {
    Ok(iterms::i_equivalent(&eqs(a)?, &eqs(b)?, depth))
}

#[pyfunction]
fn has_i_solution(text: &str) -> PyResult<bool> {
    Ok(iterms::has_i_solution(&eqs(text)?))
}

#[pyfunction]
#[pyo3(signature = (query, program = None, rule = "leftmost", depth = sld::DEFAULT_DEPTH, engine = "mma", report = false))]
fn derive<'py>(
    py: Python<'py>,
    query: &str,
    program: Option<&str>,
    rule: &str,
    depth: usize,
    engine: &str,
    report: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let program = match program {
        Some(p) => parse_program(p).map_err(value_err)?,
        None => corpus::nqueens_program(),
    };
    let q = parse_query(query).map_err(value_err)?;
    let opts = DeriveOptions {
        rule: rule.parse::<SelectionRule>().map_err(value_err)?,
        depth,
        traversal: Traversal::AllClauses,
        engine: engine.parse::<Engine>().map_err(value_err)?,
        ..DeriveOptions::default()
    };
    let tree = py.detach(|| sld::derive(&q, &program, opts)).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("nodes", tree.nodes.len())?;
    d.set_item("success", tree.has_success())?;
    d.set_item("finitely_failed", tree.finitely_failed())?;
    d.set_item("available_unifications", sld::available_unifications(&tree).len())?;
    if report {
        let r = py.detach(|| sld::check_with_default_bound(&tree));
        d.set_item("precondition_ok", r.precondition_ok)?;
        for (name, v) in r.verdicts() {
            d.set_item(name, v.label())?;
        }
    }
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (count = 100, seed = 7))]
fn theorem_test<'py>(py: Python<'py>, count: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let cfg = SuiteConfig {
        count,
        seed,
        ..SuiteConfig::default()
    };
    let r = py.detach(|| run_suite(&cfg));
    let d = PyDict::new(py);
    d.set_item("kept", r.kept)?;
    d.set_item("runs", r.runs)?;
    d.set_item("correct", r.correct)?;
    d.set_item("incorrect", r.incorrect)?;
    d.set_item("nonterminating", r.nonterminating)?;
    d.set_item("steps_checked", r.steps_checked)?;
    d.set_item("passed", r.passed())?;
    Ok(d)
}

#[pyfunction]
fn queens_oracle(n: usize) -> Vec<Vec<usize>> {
    corpus::queens_oracle(n)
}

#[pyfunction]
fn query_qin(n: usize) -> String {
    corpus::query_qin(n).to_string()
}

#[pyfunction]
fn nqueens_source() -> &'static str {
    corpus::NQUEENS_SOURCE
}

#[pymodule]
fn occur_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTrace>()?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(unify, m)?)?;
    m.add_function(wrap_pyfunction!(is_nsto, m)?)?;
    m.add_function(wrap_pyfunction!(ocf_run, m)?)?;
    m.add_function(wrap_pyfunction!(is_semi_solved, m)?)?;
    m.add_function(wrap_pyfunction!(i_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(has_i_solution, m)?)?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_test, m)?)?;
    m.add_function(wrap_pyfunction!(queens_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(query_qin, m)?)?;
    m.add_function(wrap_pyfunction!(nqueens_source, m)?)?;
    Ok(())
}
