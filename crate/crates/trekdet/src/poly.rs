//! Sparse multivariate polynomials over edge coefficients and error covariances.
//!
//! Two variable families appear throughout the crate: `l_i_j` for the
//! coefficient attached to a directed edge `i -> j`, and `w_i_j` for the
//! error covariance of a vertex pair (with `w_i_i` the variance of vertex
//! `i`). Arithmetic is exact: coefficients are 64-bit integers and every
//! operation reports overflow instead of wrapping. Rational expressions are
//! kept as numerator/denominator pairs and are never reduced; equality is
//! decided by cross-multiplication.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::MixedGraph;

/// Errors from polynomial and rational arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    /// A coefficient or exponent left the representable range.
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    /// `exact_div` was called on something that is not an exact multiple.
    #[error("polynomial division is not exact")]
    InexactDivision,
    /// A variable does not belong to the expected graph (pullback input).
    #[error("variable `{0}` does not belong to the subdivision of the graph")]
    ForeignVariable(String),
    /// A denominator admits no power-series expansion in the lambda grading.
    #[error("denominator does not support power-series expansion: {0}")]
    NoSeries(String),
    /// A rational expression was built with a zero denominator.
    #[error("zero denominator in rational expression")]
    ZeroDenominator,
    /// A serialized variable string could not be parsed back.
    #[error("malformed variable name `{0}`")]
    BadVariable(String),
}

/// Name of a vertex as it appears inside a variable: either an original
/// vertex or the subdivision vertex introduced for a bidirected edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseName {
    /// Original vertex with its externally supplied id.
    Node(u32),
    /// Subdivision vertex for the bidirected edge `{i, j}`, stored `(min, max)`.
    Sub(u32, u32),
}

impl fmt::Display for BaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseName::Node(v) => write!(f, "{v}"),
            BaseName::Sub(i, j) => write!(f, "({i},{j})"),
        }
    }
}

/// A formal variable: `Lambda(tail, head)` for a directed edge coefficient,
/// `Omega(a, b)` for an error covariance (stored with `a <= b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Lambda(BaseName, BaseName),
    Omega(BaseName, BaseName),
}

impl Var {
    pub fn lambda(tail: BaseName, head: BaseName) -> Var {
        Var::Lambda(tail, head)
    }

    /// Covariance variable; the endpoint pair is unordered and normalized.
    pub fn omega(a: BaseName, b: BaseName) -> Var {
        if b < a {
            Var::Omega(b, a)
        } else {
            Var::Omega(a, b)
        }
    }

    pub fn lambda_nodes(tail: u32, head: u32) -> Var {
        Var::Lambda(BaseName::Node(tail), BaseName::Node(head))
    }

    pub fn omega_nodes(a: u32, b: u32) -> Var {
        Var::omega(BaseName::Node(a), BaseName::Node(b))
    }

    pub fn is_lambda(&self) -> bool {
        matches!(self, Var::Lambda(..))
    }

    /// Sort key: variables are ordered by their vertex pair first and only
    /// then by family, so `w_1_1 < l_1_2 < w_1_2 < l_2_1 < w_2_2`.
    fn key(&self) -> (BaseName, BaseName, u8) {
        match *self {
            Var::Lambda(a, b) => (a, b, 0),
            Var::Omega(a, b) => (a, b, 1),
        }
    }

    /// Parse the canonical rendering produced by `Display`.
    pub fn parse(s: &str) -> Result<Var, PolyError> {
        let bad = || PolyError::BadVariable(s.to_string());
        let rest = s.strip_prefix("l_").or_else(|| s.strip_prefix("w_")).ok_or_else(bad)?;
        let (a, rest) = parse_base(rest).ok_or_else(bad)?;
        let rest = rest.strip_prefix('_').ok_or_else(bad)?;
        let (b, rest) = parse_base(rest).ok_or_else(bad)?;
        if !rest.is_empty() {
            return Err(bad());
        }
        if s.starts_with('l') {
            Ok(Var::Lambda(a, b))
        } else {
            Ok(Var::omega(a, b))
        }
    }
}

fn parse_base(s: &str) -> Option<(BaseName, &str)> {
    if let Some(inner) = s.strip_prefix('(') {
        let close = inner.find(')')?;
        let body = &inner[..close];
        let (i, j) = body.split_once(',')?;
        let i: u32 = i.parse().ok()?;
        let j: u32 = j.parse().ok()?;
        Some((BaseName::Sub(i, j), &inner[close + 1..]))
    } else {
        let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
        if end == 0 {
            return None;
        }
        let v: u32 = s[..end].parse().ok()?;
        Some((BaseName::Node(v), &s[end..]))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Lambda(a, b) => write!(f, "l_{a}_{b}"),
            Var::Omega(a, b) => write!(f, "w_{a}_{b}"),
        }
    }
}

/// A power product of variables. Zero exponents are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(BTreeMap<Var, u32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(BTreeMap::from([(v, 1)]))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    /// Total exponent over the `Lambda` family only.
    pub fn lambda_degree(&self) -> u32 {
        self.0.iter().filter(|(v, _)| v.is_lambda()).map(|(_, e)| *e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Var, u32)> {
        self.0.iter().map(|(v, e)| (v, *e))
    }

    pub fn mul_var(&mut self, v: Var, exp: u32) -> Result<(), PolyError> {
        if exp == 0 {
            return Ok(());
        }
        let slot = self.0.entry(v).or_insert(0);
        *slot = slot.checked_add(exp).ok_or(PolyError::Overflow)?;
        Ok(())
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        let mut out = self.clone();
        for (v, e) in other.factors() {
            out.mul_var(*v, e)?;
        }
        Ok(out)
    }

    /// Divides exactly, or reports that `other` is not a factor.
    fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.0.clone();
        for (v, e) in other.factors() {
            let slot = out.get_mut(v)?;
            if *slot < e {
                return None;
            }
            *slot -= e;
            if *slot == 0 {
                out.remove(v);
            }
        }
        Some(Monomial(out))
    }

    /// Plain lexicographic comparison over the variable order. Unlike the
    /// display order this is compatible with multiplication, which the
    /// exact-division loop relies on.
    fn cmp_lex(&self, other: &Monomial) -> std::cmp::Ordering {
        let mut a = self.0.iter();
        let mut b = other.0.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return std::cmp::Ordering::Equal,
                (None, Some(_)) => return std::cmp::Ordering::Less,
                (Some(_), None) => return std::cmp::Ordering::Greater,
                (Some((va, ea)), Some((vb, eb))) => {
                    // The earlier variable with a positive exponent wins.
                    match va.cmp(vb) {
                        std::cmp::Ordering::Less => return std::cmp::Ordering::Greater,
                        std::cmp::Ordering::Greater => return std::cmp::Ordering::Less,
                        std::cmp::Ordering::Equal => match ea.cmp(eb) {
                            std::cmp::Ordering::Equal => continue,
                            // Higher exponent on the shared leading variable:
                            // strictly larger in lex order.
                            ord => return ord,
                        },
                    }
                }
            }
        }
    }

    fn render(&self) -> String {
        self.0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Display order: graded first (total degree), then by the factor list.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            write!(f, "1")
        } else {
            write!(f, "{}", self.render())
        }
    }
}

/// One term of a structured polynomial export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: i64,
    pub monomial: Vec<VarPow>,
}

/// A single `variable^exponent` factor in a structured export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarPow {
    pub var: String,
    pub exp: u32,
}

/// Sparse polynomial with exact 64-bit integer coefficients.
///
/// Terms are kept in a canonical order (total degree, then the factor
/// list), so structurally equal values are mathematically equal and the
/// rendering is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial(BTreeMap<Monomial, i64>);

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial(BTreeMap::new())
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(1)
    }

    pub fn constant(c: i64) -> Polynomial {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Monomial::one(), c);
        }
        Polynomial(terms)
    }

    pub fn var(v: Var) -> Polynomial {
        Polynomial(BTreeMap::from([(Monomial::var(v), 1)]))
    }

    pub fn term(m: Monomial, c: i64) -> Polynomial {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        Polynomial(terms)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0.get(&Monomial::one()) == Some(&1)
    }

    pub fn num_terms(&self) -> usize {
        self.0.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.0.iter().map(|(m, c)| (m, *c))
    }

    pub fn constant_term(&self) -> i64 {
        self.0.get(&Monomial::one()).copied().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: i64) -> Result<(), PolyError> {
        if c == 0 {
            return Ok(());
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().checked_add(c).ok_or(PolyError::Overflow)?;
                if sum == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<Polynomial, PolyError> {
        let mut out = BTreeMap::new();
        for (m, c) in self.terms() {
            out.insert(m.clone(), c.checked_neg().ok_or(PolyError::Overflow)?);
        }
        Ok(Polynomial(out))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        let mut out = Polynomial::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                let c = ca.checked_mul(cb).ok_or(PolyError::Overflow)?;
                out.add_term(ma.mul(mb)?, c)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> Result<Polynomial, PolyError> {
        let mut out = Polynomial::zero();
        for (m, a) in self.terms() {
            out.add_term(m.clone(), a.checked_mul(c).ok_or(PolyError::Overflow)?)?;
        }
        Ok(out)
    }

    /// Drop every term whose lambda-degree exceeds `max_degree`.
    pub fn truncate_lambda(&self, max_degree: u32) -> Polynomial {
        Polynomial(
            self.0
                .iter()
                .filter(|(m, _)| m.lambda_degree() <= max_degree)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        )
    }

    fn lex_leading(&self) -> Option<(&Monomial, i64)> {
        self.0
            .iter()
            .max_by(|(a, _), (b, _)| a.cmp_lex(b))
            .map(|(m, c)| (m, *c))
    }

    /// Exact polynomial division: returns `q` with `self == q * d`.
    ///
    /// Used by the fraction-free elimination in the oracle, where divisions
    /// are exact by construction; a non-exact input is reported as an error.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial, PolyError> {
        if d.is_zero() {
            return Err(PolyError::InexactDivision);
        }
        if d.is_one() {
            return Ok(self.clone());
        }
        let (dm, dc) = d.lex_leading().expect("nonzero divisor has a leading term");
        let mut rem = self.clone();
        let mut out = Polynomial::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.lex_leading().expect("nonzero remainder has a leading term");
            let qm = rm.try_div(dm).ok_or(PolyError::InexactDivision)?;
            if rc % dc != 0 {
                return Err(PolyError::InexactDivision);
            }
            let qc = rc / dc;
            let t = Polynomial::term(qm, qc);
            rem = rem.sub(&t.mul(d)?)?;
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Deterministic text form; the inverse of nothing, but injective:
    /// distinct polynomials always render differently.
    pub fn canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.0.iter().enumerate() {
            let mag = c.unsigned_abs();
            let body = if m.is_one() {
                format!("{mag}")
            } else if mag == 1 {
                m.render()
            } else {
                format!("{mag}*{}", m.render())
            };
            if idx == 0 {
                if *c < 0 {
                    s.push('-');
                }
            } else if *c < 0 {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            s.push_str(&body);
        }
        s
    }

    /// Structured export: one record per term, in canonical term order.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.0
            .iter()
            .map(|(m, c)| TermRecord {
                coeff: *c,
                monomial: m
                    .factors()
                    .map(|(v, e)| VarPow { var: v.to_string(), exp: e })
                    .collect(),
            })
            .collect()
    }

    /// Rebuild a polynomial from its structured export.
    pub fn from_records(records: &[TermRecord]) -> Result<Polynomial, PolyError> {
        let mut out = Polynomial::zero();
        for rec in records {
            let mut m = Monomial::one();
            for vp in &rec.monomial {
                m.mul_var(Var::parse(&vp.var)?, vp.exp)?;
            }
            out.add_term(m, rec.coeff)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_string())
    }
}

/// `2^e` as an exact coefficient.
pub fn pow2(e: u32) -> Result<i64, PolyError> {
    if e >= 63 {
        return Err(PolyError::Overflow);
    }
    Ok(1i64 << e)
}

/// A ratio of polynomials. Never reduced: building and combining these
/// performs no GCD computation, so numerators and denominators stay exactly
/// as produced. Equality is decided by cross-multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalExpr {
    num: Polynomial,
    den: Polynomial,
}

impl RationalExpr {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<RationalExpr, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(RationalExpr { num, den })
    }

    pub fn from_poly(p: Polynomial) -> RationalExpr {
        RationalExpr { num: p, den: Polynomial::one() }
    }

    pub fn one() -> RationalExpr {
        RationalExpr::from_poly(Polynomial::one())
    }

    pub fn zero() -> RationalExpr {
        RationalExpr::from_poly(Polynomial::zero())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RationalExpr) -> Result<RationalExpr, PolyError> {
        // Structurally equal denominators are common (shared global
        // denominator); adding numerators directly keeps sizes down.
        if self.den == other.den {
            return Ok(RationalExpr { num: self.num.add(&other.num)?, den: self.den.clone() });
        }
        Ok(RationalExpr {
            num: self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?,
            den: self.den.mul(&other.den)?,
        })
    }

    pub fn neg(&self) -> Result<RationalExpr, PolyError> {
        Ok(RationalExpr { num: self.num.neg()?, den: self.den.clone() })
    }

    pub fn sub(&self, other: &RationalExpr) -> Result<RationalExpr, PolyError> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &RationalExpr) -> Result<RationalExpr, PolyError> {
        Ok(RationalExpr {
            num: self.num.mul(&other.num)?,
            den: self.den.mul(&other.den)?,
        })
    }

    /// Mathematical equality by cross-multiplication.
    pub fn rat_equal(&self, other: &RationalExpr) -> Result<bool, PolyError> {
        Ok(self.num.mul(&other.den)? == other.num.mul(&self.den)?)
    }

    /// Power-series expansion by lambda-degree, truncated at `max_degree`.
    ///
    /// Requires the denominator to have constant term ±1 and every other
    /// term of positive lambda-degree.
    pub fn series_truncated(&self, max_degree: u32) -> Result<Polynomial, PolyError> {
        let c = self.den.constant_term();
        let (num, den) = match c {
            1 => (self.num.clone(), self.den.clone()),
            -1 => (self.num.neg()?, self.den.neg()?),
            _ => {
                return Err(PolyError::NoSeries(format!(
                    "constant term {c} is not a unit"
                )))
            }
        };
        // den = 1 - e with every term of e of positive lambda-degree.
        let e = Polynomial::one().sub(&den)?;
        if e.terms().any(|(m, _)| m.lambda_degree() == 0) {
            return Err(PolyError::NoSeries(
                "denominator has non-constant terms of lambda-degree zero".to_string(),
            ));
        }
        let mut q = num.truncate_lambda(max_degree);
        for _ in 0..=max_degree {
            let next = num.add(&e.mul(&q)?)?.truncate_lambda(max_degree);
            if next == q {
                break;
            }
            q = next;
        }
        // The iteration must have converged to the series prefix.
        debug_assert!(num
            .sub(&den.mul(&q).unwrap())
            .unwrap()
            .truncate_lambda(max_degree)
            .is_zero());
        Ok(q)
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Rewrites a polynomial over the variables of `bidirected_subdivision(g)`
/// into one over the variables of `g` itself.
///
/// The steps, applied per monomial:
/// 1. drop the monomial if any subdivision edge variable appears squared;
/// 2. set the surviving subdivision edge variables to 1;
/// 3. rename the variance of a subdivision vertex `(i,j)` to `w_i_j`;
/// 4. keep every original-vertex variable as is.
pub fn subdivision_pullback(p: &Polynomial, g: &MixedGraph) -> Result<Polynomial, PolyError> {
    let mut out = Polynomial::zero();
    'mono: for (m, c) in p.terms() {
        let mut image = Monomial::one();
        for (v, e) in m.factors() {
            match *v {
                Var::Lambda(BaseName::Sub(i, j), BaseName::Node(h)) => {
                    if !g.has_bidirected(i, j) || (h != i && h != j) {
                        return Err(PolyError::ForeignVariable(v.to_string()));
                    }
                    if e >= 2 {
                        continue 'mono;
                    }
                    // exponent 1: the variable is set to 1 and vanishes
                }
                Var::Omega(BaseName::Sub(i, j), BaseName::Sub(i2, j2)) => {
                    if (i, j) != (i2, j2) || !g.has_bidirected(i, j) {
                        return Err(PolyError::ForeignVariable(v.to_string()));
                    }
                    image.mul_var(Var::omega_nodes(i, j), e)?;
                }
                Var::Lambda(BaseName::Node(t), BaseName::Node(h)) => {
                    if !g.has_directed(t, h) {
                        return Err(PolyError::ForeignVariable(v.to_string()));
                    }
                    image.mul_var(*v, e)?;
                }
                Var::Omega(BaseName::Node(a), BaseName::Node(b)) => {
                    if a != b || !g.has_vertex(a) {
                        return Err(PolyError::ForeignVariable(v.to_string()));
                    }
                    image.mul_var(*v, e)?;
                }
                _ => return Err(PolyError::ForeignVariable(v.to_string())),
            }
        }
        out.add_term(image, c)?;
    }
    Ok(out)
}

/// Substitutes subdivision variables by their exact images in the variables
/// of `g`: directed-edge variables stay, subdivision-edge variables become 1,
/// the variance of a subdivision vertex `(i,j)` becomes `w_i_j`, and the
/// variance of an original vertex `i` becomes `w_i_i` minus the sum of
/// `w_i_j` over the bidirected neighbours `j` of `i`.
///
/// Unlike [`subdivision_pullback`], which rewrites monomial by monomial and
/// is exact only for polynomials carrying at most one variance factor per
/// monomial (such as single covariance entries), this substitution is a ring
/// homomorphism and therefore exact for arbitrary polynomials — in
/// particular for determinants, whose monomials multiply several variance
/// factors together.
pub fn subdivision_substitute(p: &Polynomial, g: &MixedGraph) -> Result<Polynomial, PolyError> {
    let variance_image = |i: u32| -> Result<Polynomial, PolyError> {
        let mut r = Polynomial::var(Var::omega_nodes(i, i));
        for (a, b) in g.bidirected_edges() {
            if a == i || b == i {
                r = r.sub(&Polynomial::var(Var::omega_nodes(a, b)))?;
            }
        }
        Ok(r)
    };
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let mut image = Polynomial::constant(c);
        for (v, e) in m.factors() {
            let factor = match *v {
                Var::Lambda(BaseName::Sub(i, j), BaseName::Node(h)) => {
                    if !g.has_bidirected(i, j) || (h != i && h != j) {
                        return Err(PolyError::ForeignVariable(v.to_string()));
                    }
                    continue; // replaced by 1
                }
                Var::Omega(BaseName::Sub(i, j), BaseName::Sub(i2, j2)) => {
                    if (i, j) != (i2, j2) || !g.has_bidirected(i, j) {
                        return Err(PolyError::ForeignVariable(v.to_string()));
                    }
                    Polynomial::var(Var::omega_nodes(i, j))
                }
                Var::Lambda(BaseName::Node(t), BaseName::Node(h)) => {
                    if !g.has_directed(t, h) {
                        return Err(PolyError::ForeignVariable(v.to_string()));
                    }
                    Polynomial::var(*v)
                }
                Var::Omega(BaseName::Node(a), BaseName::Node(b)) => {
                    if a != b || !g.has_vertex(a) {
                        return Err(PolyError::ForeignVariable(v.to_string()));
                    }
                    variance_image(a)?
                }
                _ => return Err(PolyError::ForeignVariable(v.to_string())),
            };
            for _ in 0..e {
                image = image.mul(&factor)?;
            }
        }
        out = out.add(&image)?;
    }
    Ok(out)
}
