//! Homogeneous iterated function systems `φ_i(x) = ρx + b_i` on the line:
//! the neighbor graph of normalized differences, the finite type and weak
//! separation diagnostics read off it, and brute-force oracles.
//!
//! A normalized difference at depth `n` is `ρ^{−n}(φ_I(0) − φ_J(0))` for
//! words `I, J` of length `n`. Appending one letter to both words maps it to
//! `ρ^{−1}(d + δ)` with `δ = b_i − b_j`. Once `|d| ≥ 1` it never returns
//! below 1 (as `|δ| ≤ 1 − ρ`), so only the differences in `(−1, 1)` matter.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::algebraic::{AlgebraicError, Context, ElementIndex, FieldElement, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IfsError {
    #[error("q must satisfy 1 < q <= m + 1 with m >= 1")]
    OutOfRange,
    #[error("contraction ratio must lie in (0, 1)")]
    RatioOutOfRange,
    #[error("translations must satisfy 0 = b_0 < ... < b_m = 1 - rho")]
    InvalidTranslations,
    #[error("delta is not a difference of two translations")]
    DeltaNotInB,
    #[error("the neighbor graph is incomplete")]
    IncompleteGraph,
    #[error("enumeration of {size} words exceeds the limit {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error(transparent)]
    Algebraic(#[from] AlgebraicError),
}

/// Maps `x ↦ ρx + b_i`, `i = 0..=m`, with `0 = b_0 < … < b_m = 1 − ρ`.
#[derive(Clone, Debug)]
pub struct HomogeneousIFS {
    ctx: Context,
    rho: FieldElement,
    rho_inv: FieldElement,
    translations: Vec<FieldElement>,
    differences: Vec<FieldElement>,
}

impl HomogeneousIFS {
    pub fn new(rho: FieldElement, translations: Vec<FieldElement>) -> Result<Self, IfsError> {
        let ctx = rho.ctx().clone();
        let one = FieldElement::one(&ctx);
        if rho.sign() != Sign::Positive || rho.compare(&one)? != Ordering::Less {
            return Err(IfsError::RatioOutOfRange);
        }
        if translations.len() < 2 {
            return Err(IfsError::InvalidTranslations);
        }
        for b in &translations {
            if !b.same_context(&rho) {
                return Err(AlgebraicError::ContextMismatch.into());
            }
        }
        let last = translations.last().unwrap();
        let increasing = translations.windows(2).all(|w| w[0].cmp_exact(&w[1]) == Ordering::Less);
        if translations[0].sign() != Sign::Zero || !increasing || last.cmp_exact(&(&one - &rho)) != Ordering::Equal {
            return Err(IfsError::InvalidTranslations);
        }
        let mut index = ElementIndex::new();
        for s in &translations {
            for t in &translations {
                index.insert(s - t);
            }
        }
        let mut differences = index.into_items();
        differences.sort_by(|a, b| a.cmp_exact(b));
        Ok(Self { rho_inv: rho.inv()?, ctx, rho, translations, differences })
    }

    /// `ρ = 1/q`, `b_i = i(1 − 1/q)/m`.
    pub fn from_q_m(q: &Context, m: u32) -> Result<Self, IfsError> {
        let upper = BigRational::from_integer(BigInt::from(m) + 1);
        if m == 0
            || q.cmp_rational(&BigRational::one()) != Ordering::Greater
            || q.cmp_rational(&upper) == Ordering::Greater
        {
            return Err(IfsError::OutOfRange);
        }
        let qe = FieldElement::generator(q);
        let rho = qe.inv()?;
        let span = &FieldElement::one(q) - &rho;
        let translations = (0..=m).map(|i| span.scale(&BigRational::new(i.into(), m.into()))).collect();
        Self::new(rho, translations)
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn rho(&self) -> &FieldElement {
        &self.rho
    }

    pub fn rho_inv(&self) -> &FieldElement {
        &self.rho_inv
    }

    pub fn translations(&self) -> &[FieldElement] {
        &self.translations
    }

    /// Number of maps minus one.
    pub fn m(&self) -> usize {
        self.translations.len() - 1
    }

    /// `B = {b_s − b_t}`, sorted ascending.
    pub fn differences(&self) -> &[FieldElement] {
        &self.differences
    }
}

/// Whether consecutive translations are at most `ρ` apart.
pub fn covering_check(f: &HomogeneousIFS) -> bool {
    f.translations.windows(2).all(|w| (&w[1] - &w[0]).cmp_exact(&f.rho) != Ordering::Greater)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transition {
    Node(FieldElement),
    Exit,
}

fn step(v: &FieldElement, delta: &FieldElement, f: &HomogeneousIFS) -> Transition {
    let w = &(v + delta) * &f.rho_inv;
    let a = w.abs();
    if a.cmp_rational(&BigRational::one()) == Ordering::Less {
        Transition::Node(a)
    } else {
        Transition::Exit
    }
}

/// `ρ^{−1}(v + δ)` in absolute value if below 1.
pub fn transition(v: &FieldElement, delta: &FieldElement, f: &HomogeneousIFS) -> Result<Transition, IfsError> {
    if !delta.same_context(&f.rho) || !v.same_context(&f.rho) {
        return Err(AlgebraicError::ContextMismatch.into());
    }
    if !f.differences.iter().any(|d| d == delta) {
        return Err(IfsError::DeltaNotInB);
    }
    Ok(step(v, delta, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgeTarget {
    Node(usize),
    Exit,
}

/// Nodes are absolute normalized differences in `[0, 1)`, numbered in
/// discovery order with node 0 the root `0`. `edges[v][k]` is the outcome of
/// the `k`-th difference in sorted `B`; it is empty for unexpanded nodes.
#[derive(Clone, Debug)]
pub struct NeighborGraph {
    pub nodes: Vec<FieldElement>,
    pub deltas: Vec<FieldElement>,
    pub edges: Vec<Vec<EdgeTarget>>,
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub enum GraphOutcome {
    Complete(NeighborGraph),
    BudgetExceeded(NeighborGraph),
}

impl GraphOutcome {
    pub fn graph(&self) -> &NeighborGraph {
        match self {
            GraphOutcome::Complete(g) | GraphOutcome::BudgetExceeded(g) => g,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, GraphOutcome::Complete(_))
    }
}

pub const DEFAULT_BUDGET: usize = 100_000;

/// Breadth-first closure from 0 under all transitions.
///
/// Each BFS level is sorted by exact comparison before expansion and the
/// differences are applied in sorted order, so node numbering is
/// deterministic. Stops with [`GraphOutcome::BudgetExceeded`] as soon as
/// more than `budget` nodes exist.
pub fn build_neighbor_graph(f: &HomogeneousIFS, budget: usize) -> GraphOutcome {
    let mut index = ElementIndex::new();
    index.insert(FieldElement::zero(&f.ctx));
    let mut edges: Vec<Vec<EdgeTarget>> = vec![Vec::new()];
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        frontier.sort_by(|&a, &b| index.get(a).cmp_exact(index.get(b)));
        let mut next = Vec::new();
        for &v in &frontier {
            let value = index.get(v).clone();
            let mut out = Vec::with_capacity(f.differences.len());
            for delta in &f.differences {
                match step(&value, delta, f) {
                    Transition::Exit => out.push(EdgeTarget::Exit),
                    Transition::Node(w) => {
                        let (i, new) = index.insert(w);
                        out.push(EdgeTarget::Node(i));
                        if new {
                            edges.push(Vec::new());
                            next.push(i);
                            if index.len() > budget {
                                edges[v] = out;
                                return GraphOutcome::BudgetExceeded(NeighborGraph {
                                    nodes: index.into_items(),
                                    deltas: f.differences.clone(),
                                    edges,
                                    complete: false,
                                });
                            }
                        }
                    }
                }
            }
            edges[v] = out;
        }
        frontier = next;
    }
    GraphOutcome::Complete(NeighborGraph {
        nodes: index.into_items(),
        deltas: f.differences.clone(),
        edges,
        complete: true,
    })
}

/// Smallest positive node value, or 1 when 0 is the only node.
pub fn wsc_constant(g: &NeighborGraph) -> Result<FieldElement, IfsError> {
    if !g.complete {
        return Err(IfsError::IncompleteGraph);
    }
    let mut best: Option<&FieldElement> = None;
    for v in g.nodes.iter().filter(|v| v.sign() == Sign::Positive) {
        if best.is_none_or(|b| v.cmp_exact(b) == Ordering::Less) {
            best = Some(v);
        }
    }
    Ok(match best {
        Some(b) => b.clone(),
        None => FieldElement::one(g.nodes[0].ctx()),
    })
}

/// Least `k` such that every node reaches node 0 in at most `k` steps, or
/// `None` if some node cannot reach it.
pub fn completion_depth(g: &NeighborGraph) -> Result<Option<usize>, IfsError> {
    if !g.complete {
        return Err(IfsError::IncompleteGraph);
    }
    let n = g.nodes.len();
    let mut reverse = vec![Vec::new(); n];
    for (v, out) in g.edges.iter().enumerate() {
        for t in out {
            if let EdgeTarget::Node(w) = t {
                reverse[*w].push(v);
            }
        }
    }
    let mut dist = vec![usize::MAX; n];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(w) = queue.pop_front() {
        for &v in &reverse[w] {
            if dist[v] == usize::MAX {
                dist[v] = dist[w] + 1;
                queue.push_back(v);
            }
        }
    }
    Ok(if dist.contains(&usize::MAX) { None } else { dist.into_iter().max() })
}

pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

fn guard(base: usize, exponent: usize, limit: u128) -> Result<(), IfsError> {
    let size = (base as u128).checked_pow(exponent as u32).unwrap_or(u128::MAX);
    if size > limit {
        Err(IfsError::TooLarge { size, limit })
    } else {
        Ok(())
    }
}

/// Sorts exactly and removes exact duplicates.
fn sorted_distinct(mut v: Vec<FieldElement>) -> Vec<FieldElement> {
    let mut seen = HashSet::new();
    v.retain(|e| seen.insert((e.num().clone(), e.den().clone())));
    v.sort_by(|a, b| a.cmp_exact(b));
    v.dedup_by(|a, b| a.cmp_exact(b) == Ordering::Equal);
    v
}

/// `{|ρ^{−k}(φ_I(0) − φ_J(0))| < 1 : k ≤ n}` by enumerating word pairs.
///
/// Each surviving pair is evaluated from scratch as
/// `Σ_s ρ^{s−1−k}(b_{i_s} − b_{j_s})`; pairs whose difference has left
/// `(−1, 1)` are not extended. Guarded by `(m+1)^{2n} ≤ 10⁸`.
pub fn brute_force_differences(f: &HomogeneousIFS, n: usize) -> Result<Vec<FieldElement>, IfsError> {
    let k = f.translations.len();
    guard(k, 2 * n, BRUTE_FORCE_LIMIT)?;
    let one = BigRational::one();
    // powers of ρ^{-1}
    let mut inv_pows = vec![FieldElement::one(&f.ctx)];
    for s in 1..=n {
        let next = &inv_pows[s - 1] * &f.rho_inv;
        inv_pows.push(next);
    }
    let mut found = vec![FieldElement::zero(&f.ctx)];
    let mut stack: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    while let Some(word) = stack.pop() {
        if word.len() == n {
            continue;
        }
        for i in 0..k {
            for j in 0..k {
                let mut w = word.clone();
                w.push((i, j));
                let len = w.len();
                let mut d = FieldElement::zero(&f.ctx);
                for (s, &(a, b)) in w.iter().enumerate() {
                    // ρ^{(s+1)−1−len} = (ρ^{-1})^{len−s}
                    let diff = &f.translations[a] - &f.translations[b];
                    d = &d + &(&diff * &inv_pows[len - s]);
                }
                let a = d.abs();
                if a.cmp_rational(&one) == Ordering::Less {
                    found.push(a);
                    stack.push(w);
                }
            }
        }
    }
    Ok(sorted_distinct(found))
}

pub const OVERLAP_LIMIT: u128 = 10_000_000;

/// Sorted distinct left endpoints `φ_I(0)`, `I ∈ {0..m}^n`, of maps with
/// ratio `rho` and the given translations.
pub fn left_endpoints(
    rho: &FieldElement,
    translations: &[FieldElement],
    n: usize,
) -> Result<Vec<FieldElement>, IfsError> {
    guard(translations.len(), n, OVERLAP_LIMIT)?;
    let mut pts = vec![FieldElement::zero(rho.ctx())];
    for _ in 0..n {
        let mut next = Vec::with_capacity(pts.len() * translations.len());
        for p in &pts {
            let rp = rho * p;
            for b in translations {
                next.push(&rp + b);
            }
        }
        pts = sorted_distinct(next);
    }
    Ok(pts)
}

/// Largest number of distinct depth-`n` left endpoints in a closed window of
/// length `ρ^n`.
pub fn overlap_multiplicity_points(
    rho: &FieldElement,
    translations: &[FieldElement],
    n: usize,
) -> Result<usize, IfsError> {
    let pts = left_endpoints(rho, translations, n)?;
    let width = rho.pow(n as u32);
    let mut best = 0;
    let mut j = 0;
    for i in 0..pts.len() {
        j = j.max(i);
        while j + 1 < pts.len() && (&pts[j + 1] - &pts[i]).cmp_exact(&width) != Ordering::Greater {
            j += 1;
        }
        best = best.max(j - i + 1);
    }
    Ok(best)
}

pub fn overlap_multiplicity(f: &HomogeneousIFS, n: usize) -> Result<usize, IfsError> {
    overlap_multiplicity_points(&f.rho, &f.translations, n)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportedValue {
    pub exact: String,
    pub approx: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ExportedTarget {
    Node(usize),
    Exit(&'static str),
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportedEdge {
    pub from: usize,
    pub delta_index: usize,
    pub to: ExportedTarget,
}

/// Viewer-friendly form: values as `q`-polynomial strings with floats, and
/// edges whose target is a node index or `"EXIT"`.
#[derive(Clone, Debug, Serialize)]
pub struct GraphExport {
    pub complete: bool,
    pub nodes: Vec<ExportedValue>,
    pub deltas: Vec<ExportedValue>,
    pub edges: Vec<ExportedEdge>,
}

fn export_value(e: &FieldElement) -> ExportedValue {
    ExportedValue { exact: e.to_poly_string("q"), approx: e.to_f64() }
}

pub fn export_graph(g: &NeighborGraph) -> GraphExport {
    let mut edges = Vec::new();
    for (from, out) in g.edges.iter().enumerate() {
        for (delta_index, t) in out.iter().enumerate() {
            edges.push(ExportedEdge {
                from,
                delta_index,
                to: match t {
                    EdgeTarget::Node(i) => ExportedTarget::Node(*i),
                    EdgeTarget::Exit => ExportedTarget::Exit("EXIT"),
                },
            });
        }
    }
    GraphExport {
        complete: g.complete,
        nodes: g.nodes.iter().map(export_value).collect(),
        deltas: g.deltas.iter().map(export_value).collect(),
        edges,
    }
}

/// Rebuilds a field element from its `q`-polynomial string.
pub fn parse_exported(ctx: &Context, s: &str) -> Result<FieldElement, IfsError> {
    Ok(FieldElement::parse(ctx, s, 'q')?)
}
