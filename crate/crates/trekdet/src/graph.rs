//! Mixed graphs (directed plus bidirected edges) and the derived digraphs
//! used by the enumeration machinery.
//!
//! Two derived constructions matter here:
//!
//! * `bidirected_subdivision`: replaces every bidirected edge `{i, j}` by a
//!   fresh source vertex `(i,j)` with directed edges into `i` and `j`,
//!   leaving a plain digraph.
//! * `build_trek_graph`: the disjoint union of a reversed copy of the graph
//!   (the "opposite" copy, written `v'`) with the graph itself, joined by an
//!   edge `v' -> v` carrying the variance variable `w_v_v`. Directed paths
//!   `a' -> ... -> b` in this graph traverse one variance edge and factor
//!   into a path reversed into `a` and a path into `b`.
//!
//! Vertex ids are externally supplied integers; internal indices are dense
//! and deterministic (declaration order), and all rendering uses external
//! names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::poly::{BaseName, PolyError, Polynomial, Var};

fn fmt_line(line: &Option<usize>) -> String {
    match line {
        Some(n) => format!(" (line {n})"),
        None => String::new(),
    }
}

/// Errors from graph construction and parsing. Parse errors carry the
/// 1-based line number of the offending directive.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("loop edge at vertex {v}{}", fmt_line(.line))]
    LoopEdge { v: u32, line: Option<usize> },
    #[error("duplicate {} edge {i} {j}{}", if *.bidirected { "bidirected" } else { "directed" }, fmt_line(.line))]
    DuplicateEdge { i: u32, j: u32, bidirected: bool, line: Option<usize> },
    #[error("undeclared vertex {v}{}", fmt_line(.line))]
    UndeclaredVertex { v: u32, line: Option<usize> },
    #[error("duplicate vertex {v}{}", fmt_line(.line))]
    DuplicateVertex { v: u32, line: Option<usize> },
    #[error("digraph loop edge at {name}")]
    DigraphLoop { name: String },
    #[error("digraph duplicate edge {tail} -> {head}")]
    DigraphDuplicateEdge { tail: String, head: String },
    #[error("digraph edge endpoint {name} is not a vertex")]
    DigraphUnknownVertex { name: String },
    #[error("digraph duplicate vertex {name}")]
    DigraphDuplicateName { name: String },
    #[error("input graph already contains opposite-copy vertices")]
    OppositeInput,
    #[error("sets must have equal size: |A| = {a}, |B| = {b}")]
    SizeMismatch { a: usize, b: usize },
}

/// A mixed graph: simple directed edges plus unordered bidirected edges on
/// externally numbered vertices. A directed and a bidirected edge may share
/// the same endpoint pair; loops are rejected everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedGraph {
    vertices: Vec<u32>,
    vset: BTreeSet<u32>,
    directed: BTreeSet<(u32, u32)>,
    bidirected: BTreeSet<(u32, u32)>,
}

impl MixedGraph {
    /// Build and validate a mixed graph from explicit lists.
    pub fn build(
        vertices: Vec<u32>,
        directed: Vec<(u32, u32)>,
        bidirected: Vec<(u32, u32)>,
    ) -> Result<MixedGraph, GraphError> {
        let mut g = MixedGraph {
            vertices: Vec::new(),
            vset: BTreeSet::new(),
            directed: BTreeSet::new(),
            bidirected: BTreeSet::new(),
        };
        for v in vertices {
            g.add_vertex(v, None)?;
        }
        for (i, j) in directed {
            g.add_directed(i, j, None)?;
        }
        for (i, j) in bidirected {
            g.add_bidirected(i, j, None)?;
        }
        Ok(g)
    }

    fn add_vertex(&mut self, v: u32, line: Option<usize>) -> Result<(), GraphError> {
        if !self.vset.insert(v) {
            return Err(GraphError::DuplicateVertex { v, line });
        }
        self.vertices.push(v);
        Ok(())
    }

    fn check_endpoints(&self, i: u32, j: u32, line: Option<usize>) -> Result<(), GraphError> {
        if i == j {
            return Err(GraphError::LoopEdge { v: i, line });
        }
        for v in [i, j] {
            if !self.vset.contains(&v) {
                return Err(GraphError::UndeclaredVertex { v, line });
            }
        }
        Ok(())
    }

    fn add_directed(&mut self, i: u32, j: u32, line: Option<usize>) -> Result<(), GraphError> {
        self.check_endpoints(i, j, line)?;
        if !self.directed.insert((i, j)) {
            return Err(GraphError::DuplicateEdge { i, j, bidirected: false, line });
        }
        Ok(())
    }

    fn add_bidirected(&mut self, i: u32, j: u32, line: Option<usize>) -> Result<(), GraphError> {
        self.check_endpoints(i, j, line)?;
        let key = (i.min(j), i.max(j));
        if !self.bidirected.insert(key) {
            return Err(GraphError::DuplicateEdge { i: key.0, j: key.1, bidirected: true, line });
        }
        Ok(())
    }

    /// Parse the line-oriented text format.
    ///
    /// One directive per line: `node <id>`, `dedge <tail> <head>`,
    /// `bedge <i> <j>`. Blank lines and lines starting with `#` are
    /// ignored. Vertices must be declared before edges mention them.
    pub fn parse(text: &str) -> Result<MixedGraph, GraphError> {
        let mut g = MixedGraph {
            vertices: Vec::new(),
            vset: BTreeSet::new(),
            directed: BTreeSet::new(),
            bidirected: BTreeSet::new(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let mut tokens = body.split_whitespace();
            let directive = tokens.next().expect("non-empty line has a first token");
            let syntax = |msg: String| GraphError::Syntax { line, msg };
            let parse_id = |tokens: &mut dyn Iterator<Item = &str>| -> Result<u32, GraphError> {
                let t = tokens
                    .next()
                    .ok_or_else(|| syntax("missing vertex id".to_string()))?;
                t.parse::<u32>()
                    .map_err(|_| syntax(format!("invalid vertex id `{t}`")))
            };
            match directive {
                "node" => {
                    let v = parse_id(&mut tokens)?;
                    if tokens.next().is_some() {
                        return Err(syntax("trailing tokens after `node`".to_string()));
                    }
                    g.add_vertex(v, Some(line))?;
                }
                "dedge" | "bedge" => {
                    let i = parse_id(&mut tokens)?;
                    let j = parse_id(&mut tokens)?;
                    if tokens.next().is_some() {
                        return Err(syntax(format!("trailing tokens after `{directive}`")));
                    }
                    if directive == "dedge" {
                        g.add_directed(i, j, Some(line))?;
                    } else {
                        g.add_bidirected(i, j, Some(line))?;
                    }
                }
                other => {
                    return Err(syntax(format!("unknown directive `{other}`")));
                }
            }
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn directed_edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.directed.iter().copied()
    }

    pub fn bidirected_edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.bidirected.iter().copied()
    }

    pub fn has_vertex(&self, v: u32) -> bool {
        self.vset.contains(&v)
    }

    pub fn has_directed(&self, tail: u32, head: u32) -> bool {
        self.directed.contains(&(tail, head))
    }

    pub fn has_bidirected(&self, i: u32, j: u32) -> bool {
        self.bidirected.contains(&(i.min(j), i.max(j)))
    }

    /// True when the directed part has no directed cycle. Bidirected edges
    /// never create cycles (their subdivision vertices are sources).
    pub fn is_acyclic(&self) -> bool {
        is_acyclic(&bidirected_subdivision(self))
    }
}

/// Name of a digraph vertex: a base name, possibly in the opposite copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexName {
    pub base: BaseName,
    pub opp: bool,
}

impl VertexName {
    pub fn plain(base: BaseName) -> VertexName {
        VertexName { base, opp: false }
    }

    pub fn opposite(base: BaseName) -> VertexName {
        VertexName { base, opp: true }
    }

    pub fn node(v: u32) -> VertexName {
        VertexName::plain(BaseName::Node(v))
    }
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.base, if self.opp { "'" } else { "" })
    }
}

/// A directed edge with its variable label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiEdge {
    pub tail: usize,
    pub head: usize,
    pub label: Var,
}

/// A simple labeled digraph over named vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    names: Vec<VertexName>,
    index: BTreeMap<VertexName, usize>,
    edges: Vec<DiEdge>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl DiGraph {
    /// Build a digraph whose edge `t -> h` carries the label `l_t_h`.
    /// Opposite-copy vertices are not allowed here; they only arise in
    /// `build_trek_graph`, which labels edges itself.
    pub fn new(
        names: Vec<VertexName>,
        edges: Vec<(VertexName, VertexName)>,
    ) -> Result<DiGraph, GraphError> {
        if names.iter().any(|n| n.opp) {
            return Err(GraphError::OppositeInput);
        }
        let labeled = edges
            .into_iter()
            .map(|(t, h)| {
                let label = Var::lambda(t.base, h.base);
                (t, h, label)
            })
            .collect();
        DiGraph::with_labels(names, labeled)
    }

    /// Build a digraph with explicit edge labels.
    pub fn with_labels(
        names: Vec<VertexName>,
        edges: Vec<(VertexName, VertexName, Var)>,
    ) -> Result<DiGraph, GraphError> {
        let mut index = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(*n, i).is_some() {
                return Err(GraphError::DigraphDuplicateName { name: n.to_string() });
            }
        }
        let mut g = DiGraph {
            out_edges: vec![Vec::new(); names.len()],
            in_edges: vec![Vec::new(); names.len()],
            names,
            index,
            edges: Vec::new(),
        };
        let mut seen = BTreeSet::new();
        for (t, h, label) in edges {
            let tail = *g
                .index
                .get(&t)
                .ok_or(GraphError::DigraphUnknownVertex { name: t.to_string() })?;
            let head = *g
                .index
                .get(&h)
                .ok_or(GraphError::DigraphUnknownVertex { name: h.to_string() })?;
            if tail == head {
                return Err(GraphError::DigraphLoop { name: t.to_string() });
            }
            if !seen.insert((tail, head)) {
                return Err(GraphError::DigraphDuplicateEdge {
                    tail: t.to_string(),
                    head: h.to_string(),
                });
            }
            let idx = g.edges.len();
            g.edges.push(DiEdge { tail, head, label });
            g.out_edges[tail].push(idx);
            g.in_edges[head].push(idx);
        }
        // Deterministic neighbor order: by the other endpoint's index.
        for v in 0..g.names.len() {
            g.out_edges[v].sort_by_key(|&e| g.edges[e].head);
            g.in_edges[v].sort_by_key(|&e| g.edges[e].tail);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[VertexName] {
        &self.names
    }

    pub fn name(&self, v: usize) -> VertexName {
        self.names[v]
    }

    pub fn index_of(&self, n: &VertexName) -> Option<usize> {
        self.index.get(n).copied()
    }

    /// Index of the plain copy of original vertex `v`.
    pub fn node_index(&self, v: u32) -> Option<usize> {
        self.index_of(&VertexName::node(v))
    }

    /// Resolve a list of original vertex ids to internal indices.
    pub fn node_indices(&self, vs: &[u32]) -> Result<Vec<usize>, GraphError> {
        vs.iter()
            .map(|&v| {
                self.node_index(v)
                    .ok_or(GraphError::UndeclaredVertex { v, line: None })
            })
            .collect()
    }

    pub fn edges(&self) -> &[DiEdge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &DiEdge {
        &self.edges[idx]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// Render an edge as `tail->head` using external names.
    pub fn edge_display(&self, idx: usize) -> String {
        let e = &self.edges[idx];
        format!("{}->{}", self.names[e.tail], self.names[e.head])
    }
}

/// True when the digraph has no directed cycle (Kahn's algorithm).
pub fn is_acyclic(g: &DiGraph) -> bool {
    let n = g.vertex_count();
    let mut indeg: Vec<usize> = (0..n).map(|v| g.in_edges(v).len()).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &e in g.out_edges(v) {
            let h = g.edge(e).head;
            indeg[h] -= 1;
            if indeg[h] == 0 {
                queue.push(h);
            }
        }
    }
    seen == n
}

/// Replace each bidirected edge `{i, j}` of `g` by a new source vertex
/// `(i,j)` with directed edges `(i,j) -> i` and `(i,j) -> j`.
///
/// The result has `|V| + |B|` vertices and `|D| + 2|B|` edges; subdivision
/// vertices have no incoming edges and exactly two outgoing ones.
pub fn bidirected_subdivision(g: &MixedGraph) -> DiGraph {
    let mut names: Vec<VertexName> = g
        .vertices()
        .iter()
        .map(|&v| VertexName::node(v))
        .collect();
    let mut edges: Vec<(VertexName, VertexName)> = g
        .directed_edges()
        .map(|(t, h)| (VertexName::node(t), VertexName::node(h)))
        .collect();
    for (i, j) in g.bidirected_edges() {
        let sub = VertexName::plain(BaseName::Sub(i, j));
        names.push(sub);
        edges.push((sub, VertexName::node(i)));
        edges.push((sub, VertexName::node(j)));
    }
    DiGraph::new(names, edges).expect("a valid mixed graph subdivides to a valid digraph")
}

/// Build the auxiliary graph whose directed paths from `a'` to `b` are in
/// weight-preserving bijection with treks from `a` to `b`.
///
/// It is the disjoint union of a reversed copy of `g` (vertices `v'`, edge
/// `h' -> t'` labeled `l_t_h` for every edge `t -> h`) with `g` itself,
/// plus one edge `v' -> v` labeled `w_v_v` per vertex.
pub fn build_trek_graph(g: &DiGraph) -> Result<DiGraph, GraphError> {
    if g.names().iter().any(|n| n.opp) {
        return Err(GraphError::OppositeInput);
    }
    let mut names: Vec<VertexName> = g
        .names()
        .iter()
        .map(|n| VertexName::opposite(n.base))
        .collect();
    names.extend(g.names().iter().copied());
    let mut edges: Vec<(VertexName, VertexName, Var)> = Vec::new();
    for e in g.edges() {
        let t = g.name(e.tail);
        let h = g.name(e.head);
        edges.push((VertexName::opposite(h.base), VertexName::opposite(t.base), e.label));
    }
    for n in g.names() {
        edges.push((
            VertexName::opposite(n.base),
            *n,
            Var::omega(n.base, n.base),
        ));
    }
    for e in g.edges() {
        edges.push((g.name(e.tail), g.name(e.head), e.label));
    }
    DiGraph::with_labels(names, edges)
}

/// Number of directed walks from `from` to `to` with at most `max_len`
/// edges (the empty walk counts when `from == to`).
pub fn count_bounded_walks(g: &DiGraph, from: usize, to: usize, max_len: u32) -> u64 {
    fn rec(g: &DiGraph, at: usize, to: usize, left: u32) -> u64 {
        let mut total = u64::from(at == to);
        if left > 0 {
            for &e in g.out_edges(at) {
                total += rec(g, g.edge(e).head, to, left - 1);
            }
        }
        total
    }
    rec(g, from, to, max_len)
}

/// Sum of label products over all directed walks from `from` to `to` with
/// at most `max_len` edges. This is the truncated walk-generating series of
/// the pair.
pub fn walk_polynomial(
    g: &DiGraph,
    from: usize,
    to: usize,
    max_len: u32,
) -> Result<Polynomial, PolyError> {
    fn rec(
        g: &DiGraph,
        at: usize,
        to: usize,
        left: u32,
        prefix: &Monomial,
        acc: &mut Polynomial,
    ) -> Result<(), PolyError> {
        if at == to {
            *acc = acc.add(&Polynomial::term(prefix.clone(), 1))?;
        }
        if left > 0 {
            for &e in g.out_edges(at) {
                let mut next = prefix.clone();
                next.mul_var(g.edge(e).label, 1)?;
                rec(g, g.edge(e).head, to, left - 1, &next, acc)?;
            }
        }
        Ok(())
    }
    let mut acc = Polynomial::zero();
    rec(g, from, to, max_len, &Monomial::one(), &mut acc)?;
    Ok(acc)
}

use crate::poly::Monomial;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic_graph() {
        let g = MixedGraph::parse("# two vertices\nnode 1\nnode 2\ndedge 1 2\n").unwrap();
        assert_eq!(g.vertices(), &[1, 2]);
        assert!(g.has_directed(1, 2));
        assert!(!g.has_directed(2, 1));
        assert_eq!(g.bidirected_edges().count(), 0);
    }

    #[test]
    fn parse_mixed_graph_with_comments_and_blanks() {
        let text = "node 1\n\nnode 2\nnode 3\n# a comment\nbedge 3 2\ndedge 1 2\n";
        let g = MixedGraph::parse(text).unwrap();
        assert!(g.has_bidirected(2, 3));
        assert!(g.has_bidirected(3, 2));
        assert!(g.has_directed(1, 2));
    }

    #[test]
    fn parse_errors_are_distinct_and_carry_lines() {
        let syntax = MixedGraph::parse("node 1\nfoo 1 2\n").unwrap_err();
        assert_eq!(
            syntax,
            GraphError::Syntax { line: 2, msg: "unknown directive `foo`".to_string() }
        );
        let loops = MixedGraph::parse("node 1\ndedge 1 1\n").unwrap_err();
        assert_eq!(loops, GraphError::LoopEdge { v: 1, line: Some(2) });
        let dup = MixedGraph::parse("node 1\nnode 2\nbedge 1 2\nbedge 2 1\n").unwrap_err();
        assert_eq!(
            dup,
            GraphError::DuplicateEdge { i: 1, j: 2, bidirected: true, line: Some(4) }
        );
        let undeclared = MixedGraph::parse("node 1\ndedge 1 2\n").unwrap_err();
        assert_eq!(undeclared, GraphError::UndeclaredVertex { v: 2, line: Some(2) });
        let dup_vertex = MixedGraph::parse("node 1\nnode 1\n").unwrap_err();
        assert_eq!(dup_vertex, GraphError::DuplicateVertex { v: 1, line: Some(2) });
        let bad_id = MixedGraph::parse("node x\n").unwrap_err();
        assert!(matches!(bad_id, GraphError::Syntax { line: 1, .. }));
    }

    #[test]
    fn directed_and_bidirected_may_share_endpoints() {
        let g = MixedGraph::parse("node 1\nnode 2\ndedge 1 2\nbedge 1 2\n").unwrap();
        assert!(g.has_directed(1, 2));
        assert!(g.has_bidirected(1, 2));
    }

    #[test]
    fn acyclicity() {
        let dag = MixedGraph::build(vec![1, 2, 3], vec![(1, 2), (2, 3), (1, 3)], vec![]).unwrap();
        assert!(dag.is_acyclic());
        let cyc = MixedGraph::build(vec![1, 2], vec![(1, 2), (2, 1)], vec![]).unwrap();
        assert!(!cyc.is_acyclic());
        let single = MixedGraph::build(vec![1], vec![], vec![]).unwrap();
        assert!(single.is_acyclic());
        // Bidirected edges do not affect acyclicity.
        let mixed = MixedGraph::build(vec![1, 2], vec![], vec![(1, 2)]).unwrap();
        assert!(mixed.is_acyclic());
    }

    #[test]
    fn subdivision_counts_and_shape() {
        let g = MixedGraph::build(
            vec![1, 2, 3],
            vec![(1, 2)],
            vec![(2, 3), (1, 3)],
        )
        .unwrap();
        let d = bidirected_subdivision(&g);
        assert_eq!(d.vertex_count(), 3 + 2);
        assert_eq!(d.edge_count(), 1 + 2 * 2);
        // Each subdivision vertex: two outgoing edges, none incoming.
        for v in 0..d.vertex_count() {
            if matches!(d.name(v).base, BaseName::Sub(..)) {
                assert_eq!(d.out_edges(v).len(), 2);
                assert_eq!(d.in_edges(v).len(), 0);
            }
        }
        let sub = d
            .index_of(&VertexName::plain(BaseName::Sub(1, 3)))
            .expect("subdivision vertex exists");
        let heads: Vec<VertexName> = d
            .out_edges(sub)
            .iter()
            .map(|&e| d.name(d.edge(e).head))
            .collect();
        assert_eq!(heads, vec![VertexName::node(1), VertexName::node(3)]);
    }

    #[test]
    fn subdivision_of_pure_digraph_is_identity_shaped() {
        let g = MixedGraph::build(vec![1, 2], vec![(1, 2)], vec![]).unwrap();
        let d = bidirected_subdivision(&g);
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edge_count(), 1);
        assert_eq!(d.edge(0).label, Var::lambda_nodes(1, 2));
    }

    #[test]
    fn trek_graph_single_vertex() {
        let g = MixedGraph::build(vec![1], vec![], vec![]).unwrap();
        let h = build_trek_graph(&bidirected_subdivision(&g)).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.edge(0).label, Var::omega_nodes(1, 1));
    }

    #[test]
    fn trek_graph_of_single_edge() {
        let g = MixedGraph::build(vec![1, 2], vec![(1, 2)], vec![]).unwrap();
        let h = build_trek_graph(&bidirected_subdivision(&g)).unwrap();
        assert_eq!(h.vertex_count(), 4);
        // reversed copy edge 2' -> 1', two variance edges, plain edge 1 -> 2
        assert_eq!(h.edge_count(), 4);
        let opp2 = h.index_of(&VertexName::opposite(BaseName::Node(2))).unwrap();
        let opp1 = h.index_of(&VertexName::opposite(BaseName::Node(1))).unwrap();
        let rev = h.out_edges(opp2).iter().find(|&&e| h.edge(e).head == opp1).unwrap();
        assert_eq!(h.edge(*rev).label, Var::lambda_nodes(1, 2));
    }

    #[test]
    fn trek_graph_keeps_cycles_in_both_copies() {
        let g = MixedGraph::build(vec![1, 2], vec![(1, 2), (2, 1)], vec![]).unwrap();
        let h = build_trek_graph(&bidirected_subdivision(&g)).unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert_eq!(h.edge_count(), 6);
        assert!(!is_acyclic(&h));
    }

    #[test]
    fn trek_graph_acyclic_iff_input_acyclic() {
        let dag = MixedGraph::build(vec![1, 2, 3], vec![(1, 2), (1, 3), (2, 3)], vec![]).unwrap();
        let h = build_trek_graph(&bidirected_subdivision(&dag)).unwrap();
        assert!(is_acyclic(&h));
        let cyc = MixedGraph::build(vec![1, 2, 3], vec![(1, 2), (2, 3), (3, 1)], vec![]).unwrap();
        let hc = build_trek_graph(&bidirected_subdivision(&cyc)).unwrap();
        assert!(!is_acyclic(&hc));
    }

    #[test]
    fn trek_graph_rejects_double_application() {
        let g = MixedGraph::build(vec![1, 2], vec![(1, 2)], vec![]).unwrap();
        let h = build_trek_graph(&bidirected_subdivision(&g)).unwrap();
        assert_eq!(build_trek_graph(&h), Err(GraphError::OppositeInput));
    }

    #[test]
    fn digraph_validation() {
        let n1 = VertexName::node(1);
        let n2 = VertexName::node(2);
        assert_eq!(
            DiGraph::new(vec![n1, n2], vec![(n1, n1)]).unwrap_err(),
            GraphError::DigraphLoop { name: "1".to_string() }
        );
        assert_eq!(
            DiGraph::new(vec![n1, n2], vec![(n1, n2), (n1, n2)]).unwrap_err(),
            GraphError::DigraphDuplicateEdge { tail: "1".to_string(), head: "2".to_string() }
        );
        assert_eq!(
            DiGraph::new(vec![n1], vec![(n1, n2)]).unwrap_err(),
            GraphError::DigraphUnknownVertex { name: "2".to_string() }
        );
        assert_eq!(
            DiGraph::new(vec![n1, n1], vec![]).unwrap_err(),
            GraphError::DigraphDuplicateName { name: "1".to_string() }
        );
    }

    #[test]
    fn bounded_walk_counts() {
        let g = MixedGraph::build(vec![1, 2], vec![(1, 2), (2, 1)], vec![]).unwrap();
        let d = bidirected_subdivision(&g);
        let a = d.node_index(1).unwrap();
        // Walks 1 -> 1 of length <= 4: empty, 1212->1 (len 2), len 4.
        assert_eq!(count_bounded_walks(&d, a, a, 4), 3);
        let b = d.node_index(2).unwrap();
        assert_eq!(count_bounded_walks(&d, a, b, 3), 2);
    }
}
