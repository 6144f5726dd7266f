//! Brute-force symbolic ground truth for covariance computations.
//!
//! Everything here is computed by plain linear algebra over the polynomial
//! ring — no trek, flow, or class enumeration is involved (and none may be
//! added: this module is the independent side of every equivalence check in
//! the test suites). The covariance matrix is obtained exactly as
//! `(I - L)^-T W (I - L)^-1` via the adjugate/determinant form, with
//! fraction-free elimination supplying the determinants.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{GraphError, MixedGraph};
use crate::poly::{Polynomial, PolyError, RationalExpr, Var};

/// Errors from oracle computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("symbolic system matrix is singular")]
    Singular,
    #[error("duplicate vertex {v} in index set")]
    DuplicateIndex { v: u32 },
    #[error(transparent)]
    Det(#[from] crate::determinant::DetError),
}

/// A square matrix of rational expressions indexed by external vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    vertices: Vec<u32>,
    index: BTreeMap<u32, usize>,
    entries: Vec<Vec<RationalExpr>>,
}

impl SymbolicMatrix {
    fn new(vertices: Vec<u32>, entries: Vec<Vec<RationalExpr>>) -> SymbolicMatrix {
        let index = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        SymbolicMatrix { vertices, index, entries }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// Entry addressed by external vertex ids.
    pub fn entry(&self, i: u32, j: u32) -> Result<&RationalExpr, OracleError> {
        let r = self.pos(i)?;
        let c = self.pos(j)?;
        Ok(&self.entries[r][c])
    }

    fn pos(&self, v: u32) -> Result<usize, OracleError> {
        self.index
            .get(&v)
            .copied()
            .ok_or(OracleError::Graph(GraphError::UndeclaredVertex { v, line: None }))
    }
}

/// Determinant of a polynomial matrix by fraction-free (Bareiss)
/// elimination: every division along the way is exact.
pub(crate) fn bareiss_det(mut m: Vec<Vec<Polynomial>>) -> Result<Polynomial, PolyError> {
    let n = m.len();
    if n == 0 {
        return Ok(Polynomial::one());
    }
    let mut negate = false;
    let mut prev = Polynomial::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // Pivot: swap in a row with a nonzero entry in this column.
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Ok(Polynomial::zero());
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].mul(&m[k][k])?;
                let b = m[i][k].mul(&m[k][j])?;
                m[i][j] = a.sub(&b)?.exact_div(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        Ok(det)
    }
}

fn minor(m: &[Vec<Polynomial>], skip_row: usize, skip_col: usize) -> Vec<Vec<Polynomial>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(c, _)| *c != skip_col)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect()
}

/// The system matrix `I - L` of the directed part, ordered like
/// `g.vertices()`.
fn system_matrix(g: &MixedGraph) -> Vec<Vec<Polynomial>> {
    let vs = g.vertices();
    let pos: BTreeMap<u32, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = vs.len();
    let mut m = vec![vec![Polynomial::zero(); n]; n];
    for i in 0..n {
        m[i][i] = Polynomial::one();
    }
    for (t, h) in g.directed_edges() {
        let p = Polynomial::var(Var::lambda_nodes(t, h)).neg().expect("negating 1 fits");
        m[pos[&t]][pos[&h]] = p;
    }
    m
}

/// The error covariance matrix `W`: variances on the diagonal, one
/// symmetric off-diagonal entry per bidirected edge.
fn covariance_matrix(g: &MixedGraph) -> Vec<Vec<Polynomial>> {
    let vs = g.vertices();
    let pos: BTreeMap<u32, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = vs.len();
    let mut m = vec![vec![Polynomial::zero(); n]; n];
    for (i, &v) in vs.iter().enumerate() {
        m[i][i] = Polynomial::var(Var::omega_nodes(v, v));
    }
    for (a, b) in g.bidirected_edges() {
        let p = Polynomial::var(Var::omega_nodes(a, b));
        m[pos[&a]][pos[&b]] = p.clone();
        m[pos[&b]][pos[&a]] = p;
    }
    m
}

/// The exact covariance matrix of the model on `g`:
/// `(I - L)^-T W (I - L)^-1`, every entry a ratio of polynomials with the
/// common denominator `det(I - L)^2`. For an acyclic `g` the determinant is
/// the constant 1 and every entry reduces to a polynomial.
pub fn sigma_matrix(g: &MixedGraph) -> Result<SymbolicMatrix, OracleError> {
    let n = g.vertices().len();
    let m = system_matrix(g);
    let det = bareiss_det(m.clone())?;
    if det.is_zero() {
        return Err(OracleError::Singular);
    }
    // adj[i][j] = (-1)^(i+j) * minor(j, i)
    let mut adj = vec![vec![Polynomial::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let d = bareiss_det(minor(&m, j, i))?;
            adj[i][j] = if (i + j) % 2 == 0 { d } else { d.neg()? };
        }
    }
    let w = covariance_matrix(g);
    // num = adj^T * W * adj, den = det^2
    let mut wa = vec![vec![Polynomial::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Polynomial::zero();
            for k in 0..n {
                acc = acc.add(&w[i][k].mul(&adj[k][j])?)?;
            }
            wa[i][j] = acc;
        }
    }
    let den = det.mul(&det)?;
    let mut entries = vec![vec![RationalExpr::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Polynomial::zero();
            for k in 0..n {
                acc = acc.add(&adj[k][i].mul(&wa[k][j])?)?;
            }
            entries[i][j] = RationalExpr::new(acc, den.clone())?;
        }
    }
    Ok(SymbolicMatrix::new(g.vertices().to_vec(), entries))
}

/// Determinant of the submatrix with the given row and column vertex ids,
/// expanded by the Leibniz permutation sum over a common denominator.
pub fn det_leibniz(
    m: &SymbolicMatrix,
    rows: &[u32],
    cols: &[u32],
) -> Result<RationalExpr, OracleError> {
    if rows.len() != cols.len() {
        return Err(OracleError::Graph(GraphError::SizeMismatch {
            a: rows.len(),
            b: cols.len(),
        }));
    }
    for set in [rows, cols] {
        let mut seen = std::collections::BTreeSet::new();
        for &v in set {
            m.pos(v)?;
            if !seen.insert(v) {
                return Err(OracleError::DuplicateIndex { v });
            }
        }
    }
    let k = rows.len();
    let mut total = RationalExpr::from_poly(Polynomial::zero());
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let sign = perm_sign(&perm);
        let mut term = RationalExpr::one();
        for (i, &p) in perm.iter().enumerate() {
            term = term.mul(m.entry(rows[i], cols[p])?)?;
        }
        if sign < 0 {
            term = term.neg()?;
        }
        total = total.add(&term)?;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(total)
}

fn perm_sign(perm: &[usize]) -> i8 {
    let mut inversions = 0;
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

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Truncated Neumann-series covariance:
/// `(sum_r L^r)^T W (sum_r L^r)` with every term of lambda-degree above
/// `max_degree` dropped. Entries are polynomials (denominator 1).
pub fn sigma_series_truncated(
    g: &MixedGraph,
    max_degree: u32,
) -> Result<SymbolicMatrix, OracleError> {
    let vs = g.vertices();
    let pos: BTreeMap<u32, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = vs.len();
    let mut lambda = vec![vec![Polynomial::zero(); n]; n];
    for (t, h) in g.directed_edges() {
        lambda[pos[&t]][pos[&h]] = Polynomial::var(Var::lambda_nodes(t, h));
    }
    // T = I + L + L^2 + ... truncated.
    let mut t = vec![vec![Polynomial::zero(); n]; n];
    let mut power = vec![vec![Polynomial::zero(); n]; n];
    for i in 0..n {
        t[i][i] = Polynomial::one();
        power[i][i] = Polynomial::one();
    }
    for _ in 1..=max_degree {
        power = mat_mul(&power, &lambda, max_degree)?;
        if power.iter().all(|row| row.iter().all(Polynomial::is_zero)) {
            break;
        }
        for i in 0..n {
            for j in 0..n {
                t[i][j] = t[i][j].add(&power[i][j])?;
            }
        }
    }
    let w = covariance_matrix(g);
    let wt = mat_mul(&w, &t, max_degree)?;
    // S = T^T * (W * T)
    let mut entries = vec![vec![RationalExpr::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Polynomial::zero();
            for k in 0..n {
                acc = acc.add(&t[k][i].mul(&wt[k][j])?)?;
            }
            entries[i][j] = RationalExpr::from_poly(acc.truncate_lambda(max_degree));
        }
    }
    Ok(SymbolicMatrix::new(vs.to_vec(), entries))
}

fn mat_mul(
    a: &[Vec<Polynomial>],
    b: &[Vec<Polynomial>],
    max_degree: u32,
) -> Result<Vec<Vec<Polynomial>>, PolyError> {
    let n = a.len();
    let mut out = vec![vec![Polynomial::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Polynomial::zero();
            for k in 0..n {
                acc = acc.add(&a[i][k].mul(&b[k][j])?)?;
            }
            out[i][j] = acc.truncate_lambda(max_degree);
        }
    }
    Ok(out)
}

/// Full-stack equivalence check: the cancellation-free expansion of
/// `det Sigma[A, B]` (computed on the subdivision and pulled back) against
/// the Leibniz determinant of the ground-truth covariance matrix.
pub fn oracle_compare(g: &MixedGraph, a: &[u32], b: &[u32]) -> Result<bool, OracleError> {
    let (num, den) = crate::determinant::det_mixed_polynomials(g, a, b)?;
    let lhs = RationalExpr::new(num, den)?;
    let rhs = det_leibniz(&sigma_matrix(g)?, a, b)?;
    Ok(lhs.rat_equal(&rhs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(i: u32, j: u32) -> Polynomial {
        Polynomial::var(Var::lambda_nodes(i, j))
    }

    fn om(i: u32, j: u32) -> Polynomial {
        Polynomial::var(Var::omega_nodes(i, j))
    }

    #[test]
    fn bareiss_matches_hand_determinants() {
        // Zero diagonal forces the pivot path.
        let m = vec![
            vec![Polynomial::zero(), Polynomial::one()],
            vec![Polynomial::one(), Polynomial::zero()],
        ];
        assert_eq!(bareiss_det(m).unwrap(), Polynomial::constant(-1));
        let singular = vec![
            vec![Polynomial::one(), Polynomial::one()],
            vec![Polynomial::one(), Polynomial::one()],
        ];
        assert!(bareiss_det(singular).unwrap().is_zero());
        assert_eq!(bareiss_det(vec![]).unwrap(), Polynomial::one());
        // 3x3 symbolic spot check: det(I - L) of the two-cycle plus a sink.
        let x = lam(1, 2);
        let y = lam(2, 1);
        let m3 = vec![
            vec![Polynomial::one(), x.neg().unwrap(), lam(1, 3).neg().unwrap()],
            vec![y.neg().unwrap(), Polynomial::one(), Polynomial::zero()],
            vec![Polynomial::zero(), Polynomial::zero(), Polynomial::one()],
        ];
        let expect = Polynomial::one().sub(&x.mul(&y).unwrap()).unwrap();
        assert_eq!(bareiss_det(m3).unwrap(), expect);
    }

    #[test]
    fn sigma_single_vertex() {
        let g = MixedGraph::build(vec![1], vec![], vec![]).unwrap();
        let s = sigma_matrix(&g).unwrap();
        let e = s.entry(1, 1).unwrap();
        assert_eq!(e.num().canonical_string(), "w_1_1");
        assert!(e.den().is_one());
    }

    #[test]
    fn sigma_single_edge() {
        let g = MixedGraph::build(vec![1, 2], vec![(1, 2)], vec![]).unwrap();
        let s = sigma_matrix(&g).unwrap();
        assert_eq!(s.entry(1, 1).unwrap().num().canonical_string(), "w_1_1");
        assert_eq!(s.entry(1, 2).unwrap().num().canonical_string(), "w_1_1*l_1_2");
        assert_eq!(
            s.entry(2, 2).unwrap().num().canonical_string(),
            "w_2_2 + w_1_1*l_1_2^2"
        );
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!(s.entry(i, j).unwrap().den().is_one());
        }
    }

    #[test]
    fn sigma_pure_bidirected_edge() {
        let g = MixedGraph::build(vec![1, 2], vec![], vec![(1, 2)]).unwrap();
        let s = sigma_matrix(&g).unwrap();
        assert_eq!(s.entry(1, 2).unwrap().num().canonical_string(), "w_1_2");
        assert!(s.entry(1, 2).unwrap().den().is_one());
    }

    #[test]
    fn sigma_two_cycle_closed_form() {
        let g = MixedGraph::build(vec![1, 2], vec![(1, 2), (2, 1)], vec![]).unwrap();
        let s = sigma_matrix(&g).unwrap();
        let e11 = s.entry(1, 1).unwrap();
        // Denominator is det(I - L)^2, kept unreduced.
        assert_eq!(
            e11.den().canonical_string(),
            "1 - 2*l_1_2*l_2_1 + l_1_2^2*l_2_1^2"
        );
        assert_eq!(e11.num().canonical_string(), "w_1_1 + l_2_1^2*w_2_2");
        // Cross-check against the hand-built closed form.
        let num = om(1, 1)
            .add(&lam(2, 1).mul(&lam(2, 1)).unwrap().mul(&om(2, 2)).unwrap())
            .unwrap();
        let det = Polynomial::one().sub(&lam(1, 2).mul(&lam(2, 1)).unwrap()).unwrap();
        let expect = RationalExpr::new(num, det.mul(&det).unwrap()).unwrap();
        assert!(e11.rat_equal(&expect).unwrap());
    }

    #[test]
    fn sigma_is_symmetric() {
        let g = MixedGraph::build(
            vec![1, 2, 3],
            vec![(1, 2), (2, 3), (3, 1)],
            vec![(1, 3)],
        )
        .unwrap();
        let s = sigma_matrix(&g).unwrap();
        for &i in g.vertices() {
            for &j in g.vertices() {
                assert_eq!(s.entry(i, j).unwrap(), s.entry(j, i).unwrap());
            }
        }
    }

    #[test]
    fn leibniz_edge_cases() {
        let g = MixedGraph::build(vec![1, 2], vec![(1, 2)], vec![]).unwrap();
        let s = sigma_matrix(&g).unwrap();
        // 0x0 determinant is 1.
        let d0 = det_leibniz(&s, &[], &[]).unwrap();
        assert!(d0.rat_equal(&RationalExpr::one()).unwrap());
        // 1x1 determinant is the entry itself.
        let d1 = det_leibniz(&s, &[1], &[2]).unwrap();
        assert!(d1.rat_equal(s.entry(1, 2).unwrap()).unwrap());
        // 2x2: the cross terms cancel, leaving w_1_1*w_2_2.
        let d2 = det_leibniz(&s, &[1, 2], &[1, 2]).unwrap();
        let expect = RationalExpr::from_poly(om(1, 1).mul(&om(2, 2)).unwrap());
        assert!(d2.rat_equal(&expect).unwrap());
        // Swapping one row order flips the sign.
        let d2s = det_leibniz(&s, &[2, 1], &[1, 2]).unwrap();
        assert!(d2s.rat_equal(&expect.neg().unwrap()).unwrap());
    }

    #[test]
    fn leibniz_validates_inputs() {
        let g = MixedGraph::build(vec![1, 2], vec![(1, 2)], vec![]).unwrap();
        let s = sigma_matrix(&g).unwrap();
        assert!(matches!(
            det_leibniz(&s, &[1], &[]),
            Err(OracleError::Graph(GraphError::SizeMismatch { .. }))
        ));
        assert!(matches!(
            det_leibniz(&s, &[1, 1], &[1, 2]),
            Err(OracleError::DuplicateIndex { v: 1 })
        ));
        assert!(matches!(
            det_leibniz(&s, &[7], &[1]),
            Err(OracleError::Graph(GraphError::UndeclaredVertex { v: 7, .. }))
        ));
    }

    #[test]
    fn series_degree_zero_is_covariance() {
        let g = MixedGraph::build(vec![1, 2], vec![(1, 2)], vec![(1, 2)]).unwrap();
        let s = sigma_series_truncated(&g, 0).unwrap();
        assert_eq!(s.entry(1, 1).unwrap().num().canonical_string(), "w_1_1");
        assert_eq!(s.entry(1, 2).unwrap().num().canonical_string(), "w_1_2");
        assert_eq!(s.entry(2, 2).unwrap().num().canonical_string(), "w_2_2");
    }

    #[test]
    fn series_exact_on_acyclic_graphs() {
        let g = MixedGraph::build(vec![1, 2, 3], vec![(1, 2), (2, 3), (1, 3)], vec![(1, 2)])
            .unwrap();
        let exact = sigma_matrix(&g).unwrap();
        let series = sigma_series_truncated(&g, 2 * 3).unwrap();
        for &i in g.vertices() {
            for &j in g.vertices() {
                let e = exact.entry(i, j).unwrap();
                assert!(e.den().is_one());
                assert_eq!(e.num(), series.entry(i, j).unwrap().num());
            }
        }
    }

    #[test]
    fn series_matches_rational_expansion_on_cycle() {
        let g = MixedGraph::build(vec![1, 2], vec![(1, 2), (2, 1)], vec![]).unwrap();
        let exact = sigma_matrix(&g).unwrap();
        let series = sigma_series_truncated(&g, 4).unwrap();
        for &i in g.vertices() {
            for &j in g.vertices() {
                let expanded = exact.entry(i, j).unwrap().series_truncated(4).unwrap();
                assert_eq!(&expanded, series.entry(i, j).unwrap().num());
            }
        }
        // Frozen prefix of Sigma_11 for the two-cycle.
        let s11 = series.entry(1, 1).unwrap().num();
        let expect = "w_1_1 + 2*w_1_1*l_1_2*l_2_1 + l_2_1^2*w_2_2 \
                      + 3*w_1_1*l_1_2^2*l_2_1^2 + 2*l_1_2*l_2_1^3*w_2_2";
        assert_eq!(s11.canonical_string(), expect);
    }
}
