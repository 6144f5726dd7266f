//! Python bindings for the determinant expansion library.
//!
//! Exposes mixed graphs and the main operations on them — covariance
//! entries, determinant expansions, trek enumeration, trek separation,
//! the structural class checks, and the oracle comparison — as an
//! extension module named `trekdet_py`. Polynomials cross the boundary
//! as canonical strings, so results are directly comparable and
//! reproducible from Python.

use std::collections::{BTreeMap, BTreeSet};

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use trekdet::oracle::oracle_compare;
use trekdet::poly::Polynomial;
use trekdet::{
    bidirected_subdivision, det_mixed, det_mixed_polynomials, enumerate_treks,
    exhaustive_degree, pair_sign as pair_sign_impl, sigma_entry_collapsed,
    sigma_entry_truncated, tailswap as tailswap_impl, trek_monomial, trek_separated,
    verify_positivity, verify_power_of_two, DetExpansion, MixedGraph as Graph, Trek, TrekPath,
};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A mixed graph: vertices with directed and bidirected edges.
///
/// Usage from Python:
///
///     from trekdet_py import MixedGraph, det
///     g = MixedGraph([1, 2], directed=[(1, 2)], bidirected=[(1, 2)])
///     num, den = det(g, [1], [2])
#[pyclass(name = "MixedGraph")]
struct PyMixedGraph {
    inner: Graph,
}

#[pymethods]
impl PyMixedGraph {
    /// Build a graph from a vertex list and edge lists.
    #[new]
    #[pyo3(signature = (vertices, directed=Vec::new(), bidirected=Vec::new()))]
    fn new(
        vertices: Vec<u32>,
        directed: Vec<(u32, u32)>,
        bidirected: Vec<(u32, u32)>,
    ) -> PyResult<Self> {
        Ok(Self { inner: Graph::build(vertices, directed, bidirected).map_err(value_error)? })
    }

    /// Parse the line-based graph format (`node`, `dedge`, `bedge`).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: Graph::parse(text).map_err(value_error)? })
    }

    /// Read and parse a graph file.
    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    #[getter]
    fn vertices(&self) -> Vec<u32> {
        self.inner.vertices().to_vec()
    }

    #[getter]
    fn directed_edges(&self) -> Vec<(u32, u32)> {
        self.inner.directed_edges().collect()
    }

    #[getter]
    fn bidirected_edges(&self) -> Vec<(u32, u32)> {
        self.inner.bidirected_edges().collect()
    }

    fn is_acyclic(&self) -> bool {
        self.inner.is_acyclic()
    }

    fn __repr__(&self) -> String {
        format!(
            "MixedGraph(vertices={:?}, directed={:?}, bidirected={:?})",
            self.inner.vertices(),
            self.inner.directed_edges().collect::<Vec<_>>(),
            self.inner.bidirected_edges().collect::<Vec<_>>()
        )
    }
}

/// The covariance entry `sigma[i, j]` as a canonical polynomial string.
///
/// Acyclic graphs give the exact trek polynomial; otherwise the trek
/// series is truncated at `max_degree` directed edges (default `2 |V|`).
#[pyfunction]
#[pyo3(signature = (graph, i, j, max_degree=None))]
fn sigma(graph: &PyMixedGraph, i: u32, j: u32, max_degree: Option<u32>) -> PyResult<String> {
    let g = &graph.inner;
    let poly = if g.is_acyclic() && max_degree.is_none() {
        let mut poly = Polynomial::zero();
        for (rep, coeff) in sigma_entry_collapsed(g, i, j).map_err(value_error)? {
            poly = poly.add(&Polynomial::term(trek_monomial(&rep), coeff)).map_err(value_error)?;
        }
        poly
    } else {
        let d = max_degree.unwrap_or(2 * g.vertices().len() as u32);
        sigma_entry_truncated(g, i, j, d).map_err(value_error)?
    };
    Ok(poly.canonical_string())
}

/// The determinant `det sigma[A, B]` as canonical polynomial strings
/// `(numerator, denominator)` in the graph's own variables.
#[pyfunction]
fn det(graph: &PyMixedGraph, a: Vec<u32>, b: Vec<u32>) -> PyResult<(String, String)> {
    let (num, den) = det_mixed_polynomials(&graph.inner, &a, &b).map_err(value_error)?;
    Ok((num.canonical_string(), den.canonical_string()))
}

fn class_records(e: &DetExpansion) -> Vec<(i8, u32, String)> {
    e.classes().iter().map(|c| (c.sign, c.ud_count, c.monomial.to_string())).collect()
}

/// The cancellation-free classes of `det sigma[A, B]` over the bidirected
/// subdivision: two lists of `(sign, up_down_cycles, monomial)` triples,
/// numerator first. Each class contributes `sign * 2**up_down_cycles`.
#[pyfunction]
fn det_classes(
    graph: &PyMixedGraph,
    a: Vec<u32>,
    b: Vec<u32>,
) -> PyResult<(Vec<(i8, u32, String)>, Vec<(i8, u32, String)>)> {
    let (num, den) = det_mixed(&graph.inner, &a, &b).map_err(value_error)?;
    Ok((class_records(&num), class_records(&den)))
}

/// All treks from `i` to `j` as `(left_walk, right_walk, monomial)`
/// triples. Acyclic graphs default to the exhaustive degree bound;
/// cyclic graphs truncate at `max_degree` directed edges.
#[pyfunction]
#[pyo3(signature = (graph, i, j, max_degree=None))]
fn treks(
    graph: &PyMixedGraph,
    i: u32,
    j: u32,
    max_degree: Option<u32>,
) -> PyResult<Vec<(Vec<u32>, Vec<u32>, String)>> {
    let g = &graph.inner;
    let d = max_degree.unwrap_or_else(|| exhaustive_degree(g));
    let out = enumerate_treks(g, i, j, d)
        .map_err(value_error)?
        .iter()
        .map(|t| {
            (t.left().vertices(), t.right().vertices(), trek_monomial(t).to_string())
        })
        .collect();
    Ok(out)
}

/// Swap the walk prefixes of a trek above a shared vertex: position `k`
/// on the left walk and `l` on the right walk. Returns the new trek as
/// `(left_walk, right_walk, monomial)`.
#[pyfunction]
fn trek_tailswap(
    left: Vec<u32>,
    right: Vec<u32>,
    k: usize,
    l: usize,
) -> PyResult<(Vec<u32>, Vec<u32>, String)> {
    let t = Trek::new(
        TrekPath::through(&left).map_err(value_error)?,
        TrekPath::through(&right).map_err(value_error)?,
    );
    let s = tailswap_impl(&t, k, l).map_err(value_error)?;
    Ok((s.left().vertices(), s.right().vertices(), trek_monomial(&s).to_string()))
}

/// Whether every trek from `A` to `B` is blocked, i.e. `det sigma[A, B]`
/// vanishes identically.
#[pyfunction]
fn separated(graph: &PyMixedGraph, a: Vec<u32>, b: Vec<u32>) -> PyResult<bool> {
    trek_separated(&graph.inner, &a, &b).map_err(value_error)
}

/// Compare the expansion of `det sigma[A, B]` against the independent
/// matrix-algebra oracle; true when they agree exactly.
#[pyfunction]
fn oracle_check(graph: &PyMixedGraph, a: Vec<u32>, b: Vec<u32>) -> PyResult<bool> {
    oracle_compare(&graph.inner, &a, &b).map_err(value_error)
}

/// Run the structural class checks (uniform signs, power-of-two sizes)
/// on the determinant's monomial classes. Returns
/// `(classes_checked, violations)`; an empty violation list means both
/// checks passed.
#[pyfunction]
fn verify_classes(
    graph: &PyMixedGraph,
    a: Vec<u32>,
    b: Vec<u32>,
) -> PyResult<(usize, Vec<String>)> {
    let sub = bidirected_subdivision(&graph.inner);
    let ai = sub.node_indices(&a).map_err(value_error)?;
    let bi = sub.node_indices(&b).map_err(value_error)?;
    let positivity = verify_positivity(&sub, &ai, &bi).map_err(value_error)?;
    let sizes = verify_power_of_two(&sub, &ai, &bi).map_err(value_error)?;
    let mut violations = Vec::new();
    for v in &positivity.violations {
        violations.push(format!("positivity: {} ({})", v.monomial, v.detail));
    }
    for v in &sizes.violations {
        violations.push(format!("power-of-two: {} ({})", v.monomial, v.detail));
    }
    Ok((positivity.classes_checked, violations))
}

/// Sign of a permutation/partial-bijection pair on `{0, .., k-1}`:
/// `delta` is a permutation given as a list, `upsilon` a dict mapping the
/// complement of `y` onto the complement of `x`.
#[pyfunction]
fn pair_sign(
    delta: Vec<usize>,
    upsilon: BTreeMap<usize, usize>,
    x: Vec<usize>,
    y: Vec<usize>,
) -> PyResult<i8> {
    let xs: BTreeSet<usize> = x.into_iter().collect();
    let ys: BTreeSet<usize> = y.into_iter().collect();
    pair_sign_impl(&delta, &upsilon, &xs, &ys).map_err(value_error)
}

#[pymodule]
fn trekdet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMixedGraph>()?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(det, m)?)?;
    m.add_function(wrap_pyfunction!(det_classes, m)?)?;
    m.add_function(wrap_pyfunction!(treks, m)?)?;
    m.add_function(wrap_pyfunction!(trek_tailswap, m)?)?;
    m.add_function(wrap_pyfunction!(separated, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify_classes, m)?)?;
    m.add_function(wrap_pyfunction!(pair_sign, m)?)?;
    Ok(())
}
