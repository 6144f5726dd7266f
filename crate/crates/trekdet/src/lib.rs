//! Cancellation-free determinant expansions for Gaussian graphical models
//! on mixed graphs.
//!
//! A mixed graph carries directed edges (weighted by coefficients
//! `l_i_j`) and bidirected edges (weighted by covariances `w_i_j`), with a
//! variance `w_i_i` on every vertex. The covariance matrix of the induced
//! linear model has entries that expand into sums over treks, and the
//! determinants of its square submatrices expand into signed sums over
//! self-avoiding trek flows.
//!
//! The central facts this crate computes with — and verifies by direct
//! enumeration — are that trek flows sharing a monomial share their sign,
//! and that each monomial class has exactly `2^ud` members, where `ud`
//! counts the class's up-down cycles. Together they yield determinant
//! expansions whose terms never cancel: polynomials with `±2^ud`
//! coefficients when the directed part is acyclic, and ratios of two such
//! expansions in general. Every expansion can be checked against an
//! independent symbolic oracle that computes the covariance matrix by
//! fraction-free linear algebra.
//!
//! Modules:
//! - [`poly`]: exact sparse polynomials and unreduced rational expressions
//!   over the edge and covariance variables.
//! - [`graph`]: mixed graphs, the text format, labeled digraphs, the
//!   bidirected-edge subdivision, and the trek auxiliary graph.
//! - [`treks`]: trek enumeration, tailswapping, and single-entry
//!   covariance expansions.
//! - [`flows`]: self-avoiding flows, trek flows, up-down cycles, flow
//!   signs, and the weighted path-matrix determinant.
//! - [`determinant`]: cancellation-free determinant expansions, trek
//!   separation, and direct verification of the class invariants.
//! - [`oracle`]: the independent brute-force ground truth.
//! - [`cli`]: the command-line interface over all of the above.

pub mod cli;
pub mod determinant;
pub mod flows;
pub mod graph;
pub mod oracle;
pub mod poly;
pub mod treks;

pub use determinant::{
    det_acyclic, det_mixed, det_mixed_polynomials, det_rational, trek_separated, verify_positivity,
    verify_power_of_two, DetClass, DetError, DetExpansion, VerifyReport,
};
pub use flows::{
    enumerate_flows, enumerate_trek_flows, flow_monomial, flow_sign, pair_sign,
    path_matrix_det, trek_flow_monomial, trek_flow_sign, up_down_cycles, FlowError,
    SelfAvoidingFlow, TrekFlow, UpDownCycleSet,
};
pub use graph::{
    bidirected_subdivision, build_trek_graph, is_acyclic, DiGraph, GraphError, MixedGraph,
    VertexName,
};
pub use oracle::{
    det_leibniz, oracle_compare, sigma_matrix, sigma_series_truncated, OracleError,
    SymbolicMatrix,
};
pub use poly::{
    subdivision_pullback, subdivision_substitute, BaseName, Monomial, PolyError, Polynomial, RationalExpr, Var,
};
pub use treks::{
    enumerate_treks, exhaustive_degree, sigma_entry_collapsed, sigma_entry_truncated,
    tailswap, trek_monomial, trek_stats, Trek, TrekError, TrekPath, TrekStats,
};
