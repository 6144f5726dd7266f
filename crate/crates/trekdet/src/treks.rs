//! Treks, trek monomials, tailswapping, and single-entry covariance
//! expansions.
//!
//! A trek from `i` to `j` is a pair of directed walks: a left walk ending at
//! `i` and a right walk ending at `j`, whose start vertices (the "tops")
//! either coincide or are joined by a bidirected edge. Its monomial is the
//! product of the edge coefficients along both walks (with multiplicity)
//! times the covariance of the tops. Summed over all treks, these monomials
//! expand the covariance entry `sigma_ij` — exactly for acyclic graphs, as a
//! truncated power series otherwise.
//!
//! Tailswapping exchanges the two walk prefixes above a common vertex. It
//! preserves the trek monomial, and for acyclic graphs the monomial classes
//! it generates have size exactly `2^(i(T)-e(T))`, where `i(T)` counts the
//! non-initial position pairs sharing a vertex and `e(T)` the edges common
//! to both walks. That power of two is the collapsed expansion's
//! coefficient.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{GraphError, MixedGraph};
use crate::poly::{pow2, Monomial, Polynomial, PolyError, Var};

/// Errors from trek construction and expansion.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrekError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("edges do not form a connected walk at step {step}")]
    BrokenWalk { step: usize },
    #[error("tailswap position mismatch: left position {k} is vertex {left_vertex}, right position {l} is vertex {right_vertex}")]
    PositionMismatch { k: usize, l: usize, left_vertex: u32, right_vertex: u32 },
    #[error("tailswap position {pos} exceeds walk length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("operation requires an acyclic directed part")]
    CyclicGraph,
}

/// A directed walk, possibly empty. An empty walk still names the vertex it
/// sits on, so walks from `x` to `x` of length zero are first-class values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TrekPath {
    start: u32,
    edges: Vec<(u32, u32)>,
}

impl TrekPath {
    /// The empty walk based at `v`.
    pub fn empty(v: u32) -> TrekPath {
        TrekPath { start: v, edges: Vec::new() }
    }

    /// A walk from an explicit edge sequence; consecutive edges must chain
    /// head to tail.
    pub fn new(start: u32, edges: Vec<(u32, u32)>) -> Result<TrekPath, TrekError> {
        let mut at = start;
        for (step, &(t, h)) in edges.iter().enumerate() {
            if t != at {
                return Err(TrekError::BrokenWalk { step });
            }
            at = h;
        }
        Ok(TrekPath { start, edges })
    }

    /// A walk through the given vertex sequence (which must be nonempty).
    pub fn through(vertices: &[u32]) -> Result<TrekPath, TrekError> {
        let edges = vertices.windows(2).map(|w| (w[0], w[1])).collect();
        TrekPath::new(vertices[0], edges)
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn end(&self) -> u32 {
        self.edges.last().map_or(self.start, |&(_, h)| h)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// The visited vertex sequence: start vertex, then each edge head.
    pub fn vertices(&self) -> Vec<u32> {
        let mut vs = Vec::with_capacity(self.edges.len() + 1);
        vs.push(self.start);
        vs.extend(self.edges.iter().map(|&(_, h)| h));
        vs
    }

    fn extended(&self, head: u32) -> TrekPath {
        let mut edges = self.edges.clone();
        edges.push((self.end(), head));
        TrekPath { start: self.start, edges }
    }
}

impl std::fmt::Display for TrekPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vs: Vec<String> = self.vertices().iter().map(u32::to_string).collect();
        write!(f, "{}", vs.join("->"))
    }
}

/// A pair of directed walks whose starts are the trek's tops. Two treks are
/// equal exactly when both walks (including empty-walk base vertices) are
/// equal; treks over the same edge set can still differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trek {
    left: TrekPath,
    right: TrekPath,
}

impl Trek {
    pub fn new(left: TrekPath, right: TrekPath) -> Trek {
        Trek { left, right }
    }

    pub fn left(&self) -> &TrekPath {
        &self.left
    }

    pub fn right(&self) -> &TrekPath {
        &self.right
    }

    /// Start vertex of the left walk.
    pub fn top_left(&self) -> u32 {
        self.left.start()
    }

    /// Start vertex of the right walk.
    pub fn top_right(&self) -> u32 {
        self.right.start()
    }

    /// End of the left walk: the trek's initial vertex.
    pub fn initial(&self) -> u32 {
        self.left.end()
    }

    /// End of the right walk: the trek's final vertex.
    pub fn terminal(&self) -> u32 {
        self.right.end()
    }

    /// True when the tops differ, i.e. the trek crosses a bidirected edge.
    pub fn bridging(&self) -> bool {
        self.top_left() != self.top_right()
    }

    /// Number of directed-edge uses across both walks (the trek's length,
    /// excluding the covariance at the top).
    pub fn lambda_degree(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

impl PartialOrd for Trek {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Trek {
    /// Lexicographic on the left edge sequence, then the right, with base
    /// vertices breaking ties among empty walks.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.left.edges, self.left.start, &self.right.edges, self.right.start).cmp(&(
            &other.left.edges,
            other.left.start,
            &other.right.edges,
            other.right.start,
        ))
    }
}

impl std::fmt::Display for Trek {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// Position-sharing statistics of a trek on an acyclic graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrekStats {
    /// Pairs `(k, l) != (0, 0)` where the left walk's `k`-th vertex equals
    /// the right walk's `l`-th vertex.
    pub i_count: u32,
    /// Edges common to both walks.
    pub e_count: u32,
}

/// The trek's monomial: every directed edge contributes its coefficient
/// (with multiplicity), and the tops contribute their covariance.
pub fn trek_monomial(t: &Trek) -> Monomial {
    let mut m = Monomial::one();
    for &(a, b) in t.left.edges().iter().chain(t.right.edges()) {
        m.mul_var(Var::lambda_nodes(a, b), 1).expect("edge exponent fits in u32");
    }
    m.mul_var(Var::omega_nodes(t.top_left(), t.top_right()), 1)
        .expect("covariance exponent fits in u32");
    m
}

/// Counts `i(T)` and `e(T)` for a trek of an acyclic graph.
pub fn trek_stats(t: &Trek) -> TrekStats {
    let lv = t.left.vertices();
    let rv = t.right.vertices();
    let mut i_count = 0;
    for (k, &a) in lv.iter().enumerate() {
        for (l, &b) in rv.iter().enumerate() {
            if a == b && (k, l) != (0, 0) {
                i_count += 1;
            }
        }
    }
    let left_edges: std::collections::BTreeSet<_> = t.left.edges().iter().collect();
    let e_count = t
        .right
        .edges()
        .iter()
        .collect::<std::collections::BTreeSet<_>>()
        .intersection(&left_edges)
        .count() as u32;
    TrekStats { i_count, e_count }
}

/// Exchanges the walk prefixes above a shared vertex: position `k` on the
/// left walk and position `l` on the right walk must name the same vertex.
/// The new left walk follows the old right walk to that vertex and the old
/// left walk onward; symmetrically for the new right walk. The trek
/// monomial is unchanged.
pub fn tailswap(t: &Trek, k: usize, l: usize) -> Result<Trek, TrekError> {
    let lv = t.left.vertices();
    let rv = t.right.vertices();
    if k >= lv.len() {
        return Err(TrekError::PositionOutOfRange { pos: k, len: t.left.len() });
    }
    if l >= rv.len() {
        return Err(TrekError::PositionOutOfRange { pos: l, len: t.right.len() });
    }
    if lv[k] != rv[l] {
        return Err(TrekError::PositionMismatch {
            k,
            l,
            left_vertex: lv[k],
            right_vertex: rv[l],
        });
    }
    let mut new_left = rv[..=l].to_vec();
    new_left.extend_from_slice(&lv[k + 1..]);
    let mut new_right = lv[..=k].to_vec();
    new_right.extend_from_slice(&rv[l + 1..]);
    Ok(Trek::new(TrekPath::through(&new_left)?, TrekPath::through(&new_right)?))
}

/// All directed walks with at most `max_len` edges, grouped by end vertex.
/// On acyclic graphs walks never repeat a vertex, so these are exactly the
/// directed paths.
fn walks_by_end(g: &MixedGraph, max_len: u32) -> BTreeMap<u32, Vec<TrekPath>> {
    let mut all: BTreeMap<u32, Vec<TrekPath>> = g
        .vertices()
        .iter()
        .map(|&v| (v, vec![TrekPath::empty(v)]))
        .collect();
    let mut frontier: BTreeMap<u32, Vec<TrekPath>> =
        all.iter().map(|(&v, ps)| (v, ps.clone())).collect();
    for _ in 0..max_len {
        let mut next: BTreeMap<u32, Vec<TrekPath>> = BTreeMap::new();
        for (t, h) in g.directed_edges() {
            if let Some(ps) = frontier.get(&t) {
                next.entry(h).or_default().extend(ps.iter().map(|p| p.extended(h)));
            }
        }
        if next.values().all(Vec::is_empty) {
            break;
        }
        for (v, ps) in &next {
            all.entry(*v).or_default().extend(ps.iter().cloned());
        }
        frontier = next;
    }
    all
}

/// Degree bound that makes trek enumeration exhaustive on acyclic graphs:
/// each walk of an acyclic graph uses at most `|V| - 1` edges.
pub fn exhaustive_degree(g: &MixedGraph) -> u32 {
    2 * (g.vertices().len() as u32).saturating_sub(1)
}

/// All treks from `i` to `j` using at most `max_degree` directed edges in
/// total, each exactly once, in a deterministic order. Tops must coincide
/// or be joined by a bidirected edge.
pub fn enumerate_treks(
    g: &MixedGraph,
    i: u32,
    j: u32,
    max_degree: u32,
) -> Result<Vec<Trek>, TrekError> {
    for v in [i, j] {
        if !g.has_vertex(v) {
            return Err(GraphError::UndeclaredVertex { v, line: None }.into());
        }
    }
    let walks = walks_by_end(g, max_degree);
    let into_i = walks.get(&i).cloned().unwrap_or_default();
    let into_j = walks.get(&j).cloned().unwrap_or_default();
    let mut treks = Vec::new();
    for left in &into_i {
        for right in &into_j {
            if left.len() + right.len() > max_degree as usize {
                continue;
            }
            let s = left.start();
            let t = right.start();
            if s == t || g.has_bidirected(s, t) {
                treks.push(Trek::new(left.clone(), right.clone()));
            }
        }
    }
    treks.sort();
    Ok(treks)
}

/// The covariance entry `sigma_ij` as a sum of trek monomials, truncated at
/// `max_degree` edge uses. Exact when the directed part is acyclic and the
/// bound is at least `exhaustive_degree`.
pub fn sigma_entry_truncated(
    g: &MixedGraph,
    i: u32,
    j: u32,
    max_degree: u32,
) -> Result<Polynomial, TrekError> {
    let mut sum = Polynomial::zero();
    for t in enumerate_treks(g, i, j, max_degree)? {
        sum = sum.add(&Polynomial::term(trek_monomial(&t), 1))?;
    }
    Ok(sum)
}

/// The collapsed expansion of `sigma_ij` for acyclic graphs: one
/// representative per monomial class together with the class coefficient
/// `2^(i(T) - e(T))`. The representative is the least trek of its class in
/// enumeration order.
pub fn sigma_entry_collapsed(
    g: &MixedGraph,
    i: u32,
    j: u32,
) -> Result<Vec<(Trek, i64)>, TrekError> {
    if !g.is_acyclic() {
        return Err(TrekError::CyclicGraph);
    }
    let treks = enumerate_treks(g, i, j, exhaustive_degree(g))?;
    let mut classes: BTreeMap<Monomial, Vec<Trek>> = BTreeMap::new();
    for t in treks {
        classes.entry(trek_monomial(&t)).or_default().push(t);
    }
    let mut out = Vec::new();
    for (_, class) in classes {
        let rep = class[0].clone();
        let stats = trek_stats(&rep);
        let coeff = pow2(stats.i_count - stats.e_count)?;
        debug_assert_eq!(
            class.len() as i64,
            coeff,
            "monomial class size must match 2^(i - e) for {rep}"
        );
        out.push((rep, coeff));
    }
    Ok(out)
}
