//! Self-avoiding flows, trek flows, up-down cycles, and flow signs.
//!
//! A self-avoiding flow from an ordered vertex list `A` to an ordered list
//! `B` is a set of vertex-disjoint self-avoiding directed paths whose
//! initial vertices exhaust `A` and whose final vertices exhaust `B`,
//! together with a set of self-avoiding directed cycles, pairwise
//! vertex-disjoint and disjoint from all paths. Its sign is the sign of the
//! induced permutation times `(-1)` per cycle.
//!
//! A trek flow pairs two such flows that start from one common set of tops
//! `S`: a left flow into `A` and a right flow into `B`. Its monomial
//! multiplies a covariance for every top with the edge coefficients used by
//! either side (so an edge used by both sides appears squared), and its
//! sign is the product of the two flow signs under one shared ordering of
//! `S`.
//!
//! The up-down cycles of a trek flow live on the edges used by exactly one
//! side. Chaining each such edge to its follower — through the other flow
//! where the relevant endpoint is visited, within its own flow otherwise —
//! yields a successor digraph whose directed cycles they are. Trek flows
//! sharing a monomial form classes of size `2 ^ (number of up-down
//! cycles)`, all with equal sign, which is what makes the determinant
//! expansions assembled downstream cancellation-free.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{DiGraph, GraphError};
use crate::poly::{Monomial, Polynomial, PolyError, RationalExpr, Var};

/// Errors from flow enumeration and sign computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("vertex index {v} out of range for a graph with {count} vertices")]
    VertexOutOfRange { v: usize, count: usize },
    #[error("vertex index {v} listed twice in one endpoint list")]
    DuplicateEndpoint { v: usize },
    #[error("not a flow between the given endpoint lists: {0}")]
    NotAFlow(String),
    #[error("invalid sign-pair input: {0}")]
    PairDomain(String),
}

/// A self-avoiding directed path, stored as its visited vertex sequence and
/// the edge indices between them. An empty path still names its base
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlowPath {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl FlowPath {
    pub fn empty(v: usize) -> FlowPath {
        FlowPath { vertices: vec![v], edges: Vec::new() }
    }

    pub fn base(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("paths always hold their base vertex")
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }
}

/// A self-avoiding directed cycle, identified by its edge set. The stored
/// form starts at the cycle's minimal vertex; `edges[i]` runs from
/// `vertices[i]` to `vertices[(i + 1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlowCycle {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl FlowCycle {
    /// Canonicalize a traversal: rotate so the minimal vertex comes first.
    fn new(vertices: Vec<usize>, edges: Vec<usize>) -> FlowCycle {
        let pivot = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
            .expect("cycles are non-empty");
        let mut vs = vertices.clone();
        let mut es = edges.clone();
        vs.rotate_left(pivot);
        es.rotate_left(pivot);
        FlowCycle { vertices: vs, edges: es }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }
}

/// A self-avoiding flow: vertex-disjoint paths plus vertex-disjoint cycles
/// avoiding the paths. Paths are stored in the order of the initial list
/// they were enumerated for.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SelfAvoidingFlow {
    paths: Vec<FlowPath>,
    cycles: Vec<FlowCycle>,
}

impl SelfAvoidingFlow {
    pub fn paths(&self) -> &[FlowPath] {
        &self.paths
    }

    pub fn cycles(&self) -> &[FlowCycle] {
        &self.cycles
    }

    /// Every vertex visited by a path (bases included) or a cycle.
    pub fn visited(&self) -> BTreeSet<usize> {
        let mut vs = BTreeSet::new();
        for p in &self.paths {
            vs.extend(p.vertices.iter().copied());
        }
        for c in &self.cycles {
            vs.extend(c.vertices.iter().copied());
        }
        vs
    }

    /// Every edge index used by the flow. Self-avoidance makes this a set.
    pub fn edge_set(&self) -> BTreeSet<usize> {
        let mut es = BTreeSet::new();
        for p in &self.paths {
            es.extend(p.edges.iter().copied());
        }
        for c in &self.cycles {
            es.extend(c.edges.iter().copied());
        }
        es
    }

    /// Per-vertex incoming and outgoing edge, and per-edge endpoints. A
    /// self-avoiding flow has at most one of each per vertex.
    fn tables(&self) -> FlowTables {
        let mut t = FlowTables::default();
        for p in &self.paths {
            for (i, &e) in p.edges.iter().enumerate() {
                t.record(e, p.vertices[i], p.vertices[i + 1]);
            }
        }
        for c in &self.cycles {
            let m = c.vertices.len();
            for (i, &e) in c.edges.iter().enumerate() {
                t.record(e, c.vertices[i], c.vertices[(i + 1) % m]);
            }
        }
        t
    }
}

#[derive(Debug, Default)]
struct FlowTables {
    out_edge: BTreeMap<usize, usize>,
    in_edge: BTreeMap<usize, usize>,
    endpoints: BTreeMap<usize, (usize, usize)>,
}

impl FlowTables {
    fn record(&mut self, e: usize, tail: usize, head: usize) {
        self.out_edge.insert(tail, e);
        self.in_edge.insert(head, e);
        self.endpoints.insert(e, (tail, head));
    }
}

/// A pair of self-avoiding flows from one common top set `S`: the left one
/// into `A`, the right one into `B`. Tops are kept in ascending order and
/// both flows' paths are listed in that same order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TrekFlow {
    tops: Vec<usize>,
    left: SelfAvoidingFlow,
    right: SelfAvoidingFlow,
}

impl TrekFlow {
    pub fn tops(&self) -> &[usize] {
        &self.tops
    }

    pub fn left(&self) -> &SelfAvoidingFlow {
        &self.left
    }

    pub fn right(&self) -> &SelfAvoidingFlow {
        &self.right
    }
}

/// The up-down cycles of one trek flow: pairwise edge-disjoint subsets of
/// the edges used by exactly one of its two flows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpDownCycleSet {
    cycles: Vec<BTreeSet<usize>>,
}

impl UpDownCycleSet {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    pub fn cycles(&self) -> &[BTreeSet<usize>] {
        &self.cycles
    }
}

fn validate_endpoints(g: &DiGraph, list: &[usize]) -> Result<(), FlowError> {
    let mut seen = BTreeSet::new();
    for &v in list {
        if v >= g.vertex_count() {
            return Err(FlowError::VertexOutOfRange { v, count: g.vertex_count() });
        }
        if !seen.insert(v) {
            return Err(FlowError::DuplicateEndpoint { v });
        }
    }
    Ok(())
}

/// All self-avoiding simple cycles of `g`, canonicalized, in a fixed order.
fn simple_cycles(g: &DiGraph) -> Vec<FlowCycle> {
    let n = g.vertex_count();
    let mut cycles = Vec::new();
    let mut on_stack = vec![false; n];
    // Each cycle is found exactly once, rooted at its minimal vertex.
    for root in 0..n {
        let mut vstack = vec![root];
        let mut estack: Vec<usize> = Vec::new();
        on_stack[root] = true;
        search_cycles(g, root, &mut vstack, &mut estack, &mut on_stack, &mut cycles);
        on_stack[root] = false;
    }
    cycles.sort();
    cycles
}

fn search_cycles(
    g: &DiGraph,
    root: usize,
    vstack: &mut Vec<usize>,
    estack: &mut Vec<usize>,
    on_stack: &mut [bool],
    cycles: &mut Vec<FlowCycle>,
) {
    let v = *vstack.last().expect("stack holds the root");
    for &e in g.out_edges(v) {
        let w = g.edge(e).head;
        if w == root {
            let mut es = estack.clone();
            es.push(e);
            cycles.push(FlowCycle::new(vstack.clone(), es));
        } else if w > root && !on_stack[w] {
            vstack.push(w);
            estack.push(e);
            on_stack[w] = true;
            search_cycles(g, root, vstack, estack, on_stack, cycles);
            on_stack[w] = false;
            estack.pop();
            vstack.pop();
        }
    }
}

struct FlowSearch<'a> {
    g: &'a DiGraph,
    a: &'a [usize],
    b_slot: BTreeMap<usize, usize>,
    a_set: BTreeSet<usize>,
    all_cycles: Vec<FlowCycle>,
    used: Vec<bool>,
    b_taken: Vec<bool>,
    paths: Vec<FlowPath>,
    chosen: Vec<FlowCycle>,
    out: Vec<SelfAvoidingFlow>,
}

impl FlowSearch<'_> {
    fn run(mut self) -> Vec<SelfAvoidingFlow> {
        self.place_path(0);
        self.out.sort();
        self.out
    }

    /// Build the path starting at `a[i]`, then recurse to the next source.
    fn place_path(&mut self, i: usize) {
        if i == self.a.len() {
            self.pack_cycles(0);
            return;
        }
        let start = self.a[i];
        if self.used[start] {
            return;
        }
        self.used[start] = true;
        self.walk(i, FlowPath::empty(start));
        self.used[start] = false;
    }

    /// Extend the path for source `i` from its current end. Reaching any
    /// final vertex ends the path there: a final vertex can never be an
    /// intermediate, because the path ending on it would then intersect.
    fn walk(&mut self, i: usize, path: FlowPath) {
        let v = path.end();
        if let Some(&slot) = self.b_slot.get(&v) {
            if !self.b_taken[slot] {
                self.b_taken[slot] = true;
                self.paths.push(path);
                self.place_path(i + 1);
                self.paths.pop();
                self.b_taken[slot] = false;
            }
            return;
        }
        for &e in self.g.out_edges(v) {
            let w = self.g.edge(e).head;
            // Sources stay starts of their own paths: already-placed ones
            // are marked used, and a future one entered here would leave
            // its own path nowhere disjoint to start.
            if self.used[w] || self.a_set.contains(&w) {
                continue;
            }
            let mut longer = path.clone();
            longer.vertices.push(w);
            longer.edges.push(e);
            self.used[w] = true;
            self.walk(i, longer);
            self.used[w] = false;
        }
    }

    /// Decorate the completed path system with every packing of
    /// vertex-disjoint cycles on untouched vertices. Cycles are taken in
    /// increasing index order, so each subset is emitted exactly once.
    fn pack_cycles(&mut self, from: usize) {
        self.out.push(SelfAvoidingFlow {
            paths: self.paths.clone(),
            cycles: self.chosen.clone(),
        });
        for ci in from..self.all_cycles.len() {
            if self.all_cycles[ci].vertices.iter().any(|&v| self.used[v]) {
                continue;
            }
            for &v in self.all_cycles[ci].vertices() {
                self.used[v] = true;
            }
            self.chosen.push(self.all_cycles[ci].clone());
            self.pack_cycles(ci + 1);
            self.chosen.pop();
            for &v in self.all_cycles[ci].vertices() {
                self.used[v] = false;
            }
        }
    }
}

/// All self-avoiding flows from `A` to `B`, each exactly once, in a
/// deterministic order. `A` and `B` are ordered lists of distinct vertex
/// indices of equal length.
pub fn enumerate_flows(
    g: &DiGraph,
    a: &[usize],
    b: &[usize],
) -> Result<Vec<SelfAvoidingFlow>, FlowError> {
    if a.len() != b.len() {
        return Err(GraphError::SizeMismatch { a: a.len(), b: b.len() }.into());
    }
    validate_endpoints(g, a)?;
    validate_endpoints(g, b)?;
    let search = FlowSearch {
        g,
        a,
        b_slot: b.iter().enumerate().map(|(i, &v)| (v, i)).collect(),
        a_set: a.iter().copied().collect(),
        all_cycles: simple_cycles(g),
        used: vec![false; g.vertex_count()],
        b_taken: vec![false; b.len()],
        paths: Vec::new(),
        chosen: Vec::new(),
        out: Vec::new(),
    };
    Ok(search.run())
}

/// True when at least one self-avoiding flow from `A` to `B` exists. Only
/// the path system matters — cycles are optional decoration — so this is a
/// pure existence search with early exit.
pub fn exists_flow(g: &DiGraph, a: &[usize], b: &[usize]) -> Result<bool, FlowError> {
    if a.len() != b.len() {
        return Err(GraphError::SizeMismatch { a: a.len(), b: b.len() }.into());
    }
    validate_endpoints(g, a)?;
    validate_endpoints(g, b)?;
    let mut used = vec![false; g.vertex_count()];
    let b_slot: BTreeMap<usize, usize> = b.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let a_set: BTreeSet<usize> = a.iter().copied().collect();
    let mut b_taken = vec![false; b.len()];
    fn place(
        g: &DiGraph,
        a: &[usize],
        a_set: &BTreeSet<usize>,
        b_slot: &BTreeMap<usize, usize>,
        used: &mut [bool],
        b_taken: &mut [bool],
        i: usize,
    ) -> bool {
        if i == a.len() {
            return true;
        }
        let start = a[i];
        if used[start] {
            return false;
        }
        used[start] = true;
        let found = extend(g, a, a_set, b_slot, used, b_taken, i, start);
        used[start] = false;
        found
    }
    #[allow(clippy::too_many_arguments)]
    fn extend(
        g: &DiGraph,
        a: &[usize],
        a_set: &BTreeSet<usize>,
        b_slot: &BTreeMap<usize, usize>,
        used: &mut [bool],
        b_taken: &mut [bool],
        i: usize,
        v: usize,
    ) -> bool {
        if let Some(&slot) = b_slot.get(&v) {
            if b_taken[slot] {
                return false;
            }
            b_taken[slot] = true;
            let found = place(g, a, a_set, b_slot, used, b_taken, i + 1);
            b_taken[slot] = false;
            return found;
        }
        for &e in g.out_edges(v) {
            let w = g.edge(e).head;
            if used[w] || a_set.contains(&w) {
                continue;
            }
            used[w] = true;
            let found = extend(g, a, a_set, b_slot, used, b_taken, i, w);
            used[w] = false;
            if found {
                return true;
            }
        }
        false
    }
    Ok(place(g, a, &a_set, &b_slot, &mut used, &mut b_taken, 0))
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut inversions = 0u32;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of a flow from `A` to `B`: the sign of the permutation its paths
/// induce between the two orderings, times `(-1)` per cycle.
pub fn flow_sign(f: &SelfAvoidingFlow, a: &[usize], b: &[usize]) -> Result<i8, FlowError> {
    if a.len() != b.len() {
        return Err(GraphError::SizeMismatch { a: a.len(), b: b.len() }.into());
    }
    if f.paths.len() != a.len() {
        return Err(FlowError::NotAFlow(format!(
            "{} paths for {} sources",
            f.paths.len(),
            a.len()
        )));
    }
    let b_slot: BTreeMap<usize, usize> = b.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let a_slot: BTreeMap<usize, usize> = a.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut perm = vec![usize::MAX; a.len()];
    for p in &f.paths {
        let ai = *a_slot
            .get(&p.base())
            .ok_or_else(|| FlowError::NotAFlow(format!("path base {} not a source", p.base())))?;
        let bi = *b_slot
            .get(&p.end())
            .ok_or_else(|| FlowError::NotAFlow(format!("path end {} not a sink", p.end())))?;
        if perm[ai] != usize::MAX {
            return Err(FlowError::NotAFlow(format!("source {} used twice", p.base())));
        }
        perm[ai] = bi;
    }
    let mut seen = vec![false; perm.len()];
    for &x in &perm {
        if x == usize::MAX || seen[x] {
            return Err(FlowError::NotAFlow("paths do not pair sources with sinks".into()));
        }
        seen[x] = true;
    }
    let base = permutation_sign(&perm);
    Ok(if f.cycles.len() % 2 == 0 { base } else { -base })
}

/// Product of the edge labels used by the flow.
pub fn flow_monomial(f: &SelfAvoidingFlow, g: &DiGraph) -> Monomial {
    let mut m = Monomial::one();
    for e in f.edge_set() {
        m.mul_var(g.edge(e).label, 1).expect("flow exponents stay tiny");
    }
    m
}

/// All self-avoiding trek flows from `A` to `B`: for every top subset `S`
/// of size `|A|`, every pairing of a flow `S -> A` with a flow `S -> B`.
pub fn enumerate_trek_flows(
    g: &DiGraph,
    a: &[usize],
    b: &[usize],
) -> Result<Vec<TrekFlow>, FlowError> {
    if a.len() != b.len() {
        return Err(GraphError::SizeMismatch { a: a.len(), b: b.len() }.into());
    }
    validate_endpoints(g, a)?;
    validate_endpoints(g, b)?;
    let k = a.len();
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut subset: Vec<usize> = Vec::with_capacity(k);
    enumerate_tops(g, a, b, k, n, 0, &mut subset, &mut out)?;
    Ok(out)
}

fn enumerate_tops(
    g: &DiGraph,
    a: &[usize],
    b: &[usize],
    k: usize,
    n: usize,
    from: usize,
    subset: &mut Vec<usize>,
    out: &mut Vec<TrekFlow>,
) -> Result<(), FlowError> {
    if subset.len() == k {
        let left = enumerate_flows(g, subset, a)?;
        if left.is_empty() {
            return Ok(());
        }
        let right = enumerate_flows(g, subset, b)?;
        for l in &left {
            for r in &right {
                out.push(TrekFlow {
                    tops: subset.clone(),
                    left: l.clone(),
                    right: r.clone(),
                });
            }
        }
        return Ok(());
    }
    // Not enough vertices left to complete the subset.
    let needed = k - subset.len();
    for v in from..n {
        if n - v < needed {
            break;
        }
        subset.push(v);
        enumerate_tops(g, a, b, k, n, v + 1, subset, out)?;
        subset.pop();
    }
    Ok(())
}

/// Sign of a trek flow: the product of its two flow signs, both taken with
/// the same (ascending) ordering of the tops. The product is independent
/// of that choice, since reordering tops flips both factors together.
pub fn trek_flow_sign(t: &TrekFlow, a: &[usize], b: &[usize]) -> Result<i8, FlowError> {
    let l = flow_sign(&t.left, &t.tops, a)?;
    let r = flow_sign(&t.right, &t.tops, b)?;
    Ok(l * r)
}

/// Monomial of a trek flow: one covariance per top and every edge label
/// used by either flow, with multiplicity — an edge used by both sides
/// appears squared.
pub fn trek_flow_monomial(t: &TrekFlow, g: &DiGraph) -> Monomial {
    let mut m = Monomial::one();
    for &s in &t.tops {
        let base = g.name(s).base;
        m.mul_var(Var::omega(base, base), 1).expect("top exponents stay tiny");
    }
    for flow in [&t.left, &t.right] {
        for e in flow.edge_set() {
            m.mul_var(g.edge(e).label, 1).expect("edge exponents stay tiny");
        }
    }
    m
}

/// The up-down cycles of a trek flow.
///
/// Let `E` be the edges used by exactly one side. Every `e ∈ E` gets at
/// most one successor: for a left edge `x -> y`, the right flow's incoming
/// edge at `y` when the right flow visits `y` (even by an empty path), and
/// otherwise the left flow's outgoing edge at `y`; for a right edge
/// `x -> y`, the left flow's outgoing edge at `x` when the left flow
/// visits `x`, and otherwise the right flow's incoming edge at `x`. The
/// up-down cycles are the supports of the directed cycles of this
/// successor graph.
pub fn up_down_cycles(t: &TrekFlow) -> UpDownCycleSet {
    let lt = t.left.tables();
    let rt = t.right.tables();
    let left_visited = t.left.visited();
    let right_visited = t.right.visited();
    let left_edges = t.left.edge_set();
    let right_edges = t.right.edge_set();
    let e_set: BTreeSet<usize> = left_edges.symmetric_difference(&right_edges).copied().collect();
    let mut succ: BTreeMap<usize, usize> = BTreeMap::new();
    for &e in &e_set {
        let next = if left_edges.contains(&e) {
            let (_, y) = lt.endpoints[&e];
            if right_visited.contains(&y) {
                rt.in_edge.get(&y).copied()
            } else {
                lt.out_edge.get(&y).copied()
            }
        } else {
            let (x, _) = rt.endpoints[&e];
            if left_visited.contains(&x) {
                lt.out_edge.get(&x).copied()
            } else {
                rt.in_edge.get(&x).copied()
            }
        };
        if let Some(f) = next {
            debug_assert!(e_set.contains(&f), "successors stay within the one-sided edges");
            succ.insert(e, f);
        }
    }
    // Cycle supports of a partial functional graph.
    let mut state: BTreeMap<usize, u8> = e_set.iter().map(|&e| (e, 0)).collect();
    let mut cycles = Vec::new();
    for &start in &e_set {
        if state[&start] != 0 {
            continue;
        }
        let mut trail = Vec::new();
        let mut cur = start;
        loop {
            state.insert(cur, 1);
            trail.push(cur);
            match succ.get(&cur) {
                None => break,
                Some(&nxt) => match state[&nxt] {
                    0 => cur = nxt,
                    1 => {
                        let pos = trail
                            .iter()
                            .position(|&x| x == nxt)
                            .expect("in-progress edges sit on the trail");
                        cycles.push(trail[pos..].iter().copied().collect::<BTreeSet<_>>());
                        break;
                    }
                    _ => break,
                },
            }
        }
        for e in trail {
            state.insert(e, 2);
        }
    }
    cycles.sort();
    UpDownCycleSet { cycles }
}

/// The determinant of the weighted path matrix of `g` between `A` and `B`,
/// as an unreduced ratio: the numerator sums `sign * monomial` over all
/// self-avoiding flows from `A` to `B`, the denominator over all flows
/// consisting of vertex-disjoint cycles only.
pub fn path_matrix_det(g: &DiGraph, a: &[usize], b: &[usize]) -> Result<RationalExpr, FlowError> {
    let mut num = Polynomial::zero();
    for f in enumerate_flows(g, a, b)? {
        let s = flow_sign(&f, a, b)?;
        num = num.add(&Polynomial::term(flow_monomial(&f, g), s as i64))?;
    }
    let mut den = Polynomial::zero();
    for f in enumerate_flows(g, &[], &[])? {
        let s = flow_sign(&f, &[], &[])?;
        den = den.add(&Polynomial::term(flow_monomial(&f, g), s as i64))?;
    }
    Ok(RationalExpr::new(num, den)?)
}

/// Sign of a permutation/partial-bijection pair on `{0, .., k-1}`.
///
/// `delta` is a permutation of the full index set; `upsilon` maps exactly
/// the complement of `y` bijectively onto the complement of `x`. Walking
/// down-arrows `i -> delta(i)` and up-arrows `j -> upsilon(j)` from each
/// element of `x` lands in `y` and defines a bijection `x -> y`; the
/// result is that bijection's sign (in the natural orderings) times `(-1)`
/// per directed cycle of the walk graph.
pub fn pair_sign(
    delta: &[usize],
    upsilon: &BTreeMap<usize, usize>,
    x: &BTreeSet<usize>,
    y: &BTreeSet<usize>,
) -> Result<i8, FlowError> {
    let k = delta.len();
    let mut seen = vec![false; k];
    for &d in delta {
        if d >= k || seen[d] {
            return Err(FlowError::PairDomain(format!(
                "delta is not a permutation of 0..{k}"
            )));
        }
        seen[d] = true;
    }
    if x.len() != y.len() {
        return Err(FlowError::PairDomain(format!(
            "|x| = {} but |y| = {}",
            x.len(),
            y.len()
        )));
    }
    for set in [x, y] {
        if set.iter().any(|&v| v >= k) {
            return Err(FlowError::PairDomain(format!("subset element out of 0..{k}")));
        }
    }
    let y_comp: BTreeSet<usize> = (0..k).filter(|v| !y.contains(v)).collect();
    let x_comp: BTreeSet<usize> = (0..k).filter(|v| !x.contains(v)).collect();
    let keys: BTreeSet<usize> = upsilon.keys().copied().collect();
    let values: BTreeSet<usize> = upsilon.values().copied().collect();
    if keys != y_comp || values != x_comp || values.len() != upsilon.len() {
        return Err(FlowError::PairDomain(
            "upsilon must map the complement of y bijectively onto the complement of x".into(),
        ));
    }
    // The induced bijection x -> y, as slot positions in sorted order.
    let ys: Vec<usize> = y.iter().copied().collect();
    let mut perm = Vec::with_capacity(x.len());
    for &xi in x {
        let mut cur = xi;
        let mut steps = 0;
        let target = loop {
            let down = delta[cur];
            if y.contains(&down) {
                break down;
            }
            cur = upsilon[&down];
            steps += 1;
            assert!(steps <= k, "walks from x terminate within k steps");
        };
        perm.push(ys.iter().position(|&v| v == target).expect("target lies in y"));
    }
    let pi_sign = permutation_sign(&perm);
    // Cycle count of the bipartite walk graph: nodes 0..k are the first
    // copy, k..2k the second; every first-copy node steps down, and a
    // second-copy node steps up only where upsilon is defined.
    let succ = |v: usize| -> Option<usize> {
        if v < k {
            Some(k + delta[v])
        } else {
            upsilon.get(&(v - k)).copied()
        }
    };
    let mut state = vec![0u8; 2 * k];
    let mut n_cycles = 0u32;
    for start in 0..2 * k {
        if state[start] != 0 {
            continue;
        }
        let mut trail = Vec::new();
        let mut cur = start;
        loop {
            state[cur] = 1;
            trail.push(cur);
            match succ(cur) {
                None => break,
                Some(nxt) => match state[nxt] {
                    0 => cur = nxt,
                    1 => {
                        n_cycles += 1;
                        break;
                    }
                    _ => break,
                },
            }
        }
        for v in trail {
            state[v] = 2;
        }
    }
    Ok(if n_cycles % 2 == 0 { pi_sign } else { -pi_sign })
}
