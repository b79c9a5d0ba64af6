use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use pisot_core::algebraic::{AlgebraicReal, Context, FieldElement, IntPolynomial};
use pisot_core::classify::{classify_number, ClassTag};
use pisot_core::ifs::{
    brute_force_differences, build_neighbor_graph, completion_depth, covering_check, export_graph, left_endpoints,
    overlap_multiplicity, parse_exported, transition, wsc_constant, EdgeTarget, GraphOutcome, HomogeneousIFS,
    NeighborGraph, Transition,
};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ctx_for(c: &[i64]) -> Context {
    Arc::new(AlgebraicReal::largest_real_root(&IntPolynomial::from_i64s(c)).unwrap())
}

/// Pisot numbers with small neighbor graphs, paired with the digit bound.
fn small_pisot() -> Vec<(Context, u32)> {
    vec![
        (ctx_for(&[-1, -1, 1]), 1),
        (ctx_for(&[-1, -1, -1, 1]), 1),
        (ctx_for(&[-1, -1, -1, -1, 1]), 1),
        (ctx_for(&[-1, 1, -2, 1]), 1),
        (ctx_for(&[-1, -2, 1]), 2),
        (ctx_for(&[1, -3, 1]), 2),
        (ctx_for(&[-2, -2, 1]), 2),
        (Arc::new(AlgebraicReal::from_integer(2)), 1),
        (Arc::new(AlgebraicReal::from_integer(2)), 2),
    ]
}

fn complete_graph(q: &Context, m: u32) -> (HomogeneousIFS, NeighborGraph) {
    let f = HomogeneousIFS::from_q_m(q, m).unwrap();
    match build_neighbor_graph(&f, 1000) {
        GraphOutcome::Complete(g) => (f, g),
        GraphOutcome::BudgetExceeded(_) => panic!("graph for q={} did not close", q.to_f64()),
    }
}

fn sorted(mut v: Vec<FieldElement>) -> Vec<FieldElement> {
    v.sort_by(|a, b| a.cmp_exact(b));
    v
}

/// Every `|Σ_s ρ^{s−1−n}(b_{i_s} − b_{j_s})|` for all word pairs of length
/// exactly `n`, with no pruning.
fn all_normalized_differences(f: &HomogeneousIFS, n: usize) -> Vec<FieldElement> {
    let ctx = f.ctx();
    let b = f.translations();
    let k = b.len();
    let mut level = vec![FieldElement::zero(ctx)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * k * k);
        for d in &level {
            for i in 0..k {
                for j in 0..k {
                    next.push(&(d + &(&b[i] - &b[j])) * f.rho_inv());
                }
            }
        }
        level = next;
    }
    level.into_iter().map(|d| d.abs()).collect()
}

#[test]
fn node_sets_match_brute_force() {
    for (q, m) in small_pisot() {
        let (f, g) = complete_graph(&q, m);
        let k = f.translations().len() as u32;
        // largest depth the oracle guard admits, capped at twice the node count
        let mut n = 2 * g.nodes.len();
        while u128::from(k).pow(2 * n as u32) > 100_000_000 {
            n -= 1;
        }
        let brute = brute_force_differences(&f, n).unwrap();
        let nodes = sorted(g.nodes.clone());
        if n == 2 * g.nodes.len() {
            assert_eq!(brute, nodes, "q={} m={m}", q.to_f64());
        } else {
            assert!(brute.iter().all(|d| nodes.contains(d)), "q={} m={m}", q.to_f64());
        }
    }
}

#[test]
fn every_short_difference_is_large_or_a_node() {
    for (q, m) in small_pisot() {
        let (f, g) = complete_graph(&q, m);
        let depth = if m == 1 { 5 } else { 3 };
        for n in 1..=depth {
            for d in all_normalized_differences(&f, n) {
                let small = d.cmp_rational(&rat(1, 1)) == Ordering::Less;
                assert!(!small || g.nodes.contains(&d), "q={} m={m} n={n} d={d}", q.to_f64());
            }
        }
    }
}

#[test]
fn edges_agree_with_transitions() {
    for (q, m) in small_pisot() {
        let (f, g) = complete_graph(&q, m);
        assert_eq!(g.deltas, f.differences());
        for (v, row) in g.nodes.iter().zip(&g.edges) {
            assert_eq!(row.len(), g.deltas.len());
            for (delta, e) in g.deltas.iter().zip(row) {
                match (transition(v, delta, &f).unwrap(), e) {
                    (Transition::Exit, EdgeTarget::Exit) => {}
                    (Transition::Node(w), EdgeTarget::Node(i)) => assert_eq!(w, g.nodes[*i]),
                    (t, e) => panic!("transition {t:?} but edge {e:?}"),
                }
            }
        }
    }
}

#[test]
fn graphs_are_deterministic_and_export_round_trips() {
    for (q, m) in small_pisot() {
        let (f, g) = complete_graph(&q, m);
        let again = build_neighbor_graph(&f, 1000);
        assert_eq!(again.graph().nodes, g.nodes);
        assert_eq!(again.graph().edges, g.edges);
        let ex = export_graph(&g);
        let json = serde_json::to_string(&ex).unwrap();
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        let nodes = back["nodes"].as_array().unwrap();
        assert_eq!(nodes.len(), g.nodes.len());
        for (v, node) in g.nodes.iter().zip(nodes) {
            let parsed = parse_exported(&q, node["exact"].as_str().unwrap()).unwrap();
            assert_eq!(&parsed, v);
            assert!((node["approx"].as_f64().unwrap() - v.to_f64()).abs() < 1e-12);
        }
    }
}

#[test]
fn every_small_pisot_graph_completes_to_zero() {
    for (q, m) in small_pisot() {
        let (_, g) = complete_graph(&q, m);
        let c = wsc_constant(&g).unwrap();
        assert!(g.nodes.iter().all(|v| v.is_zero() || v.cmp_exact(&c) != Ordering::Less));
        assert!(completion_depth(&g).unwrap().is_some(), "q={} m={m}", q.to_f64());
    }
}

#[test]
fn overlap_respects_pigeonhole_bound() {
    for (q, m) in small_pisot() {
        let (f, g) = complete_graph(&q, m);
        let c = wsc_constant(&g).unwrap();
        let limit = c.inv().unwrap().floor().to_usize().unwrap() + 1;
        let depth = if m == 1 { 6 } else { 5 };
        for n in 1..=depth {
            let l = overlap_multiplicity(&f, n).unwrap();
            assert!(l <= limit, "q={} m={m} n={n}: {l} > {limit}", q.to_f64());
        }
    }
}

#[test]
fn golden_overlap_is_non_decreasing() {
    let f = HomogeneousIFS::from_q_m(&ctx_for(&[-1, -1, 1]), 1).unwrap();
    let counts: Vec<usize> = (1..=12).map(|n| overlap_multiplicity(&f, n).unwrap()).collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    let two = HomogeneousIFS::from_q_m(&Arc::new(AlgebraicReal::from_integer(2)), 1).unwrap();
    assert_eq!(overlap_multiplicity(&two, 3).unwrap(), 2);
}

fn assert_covers(f: &HomogeneousIFS, n: usize) {
    let pts = left_endpoints(f.rho(), f.translations(), n).unwrap();
    let width = f.rho().pow(n as u32);
    assert!(pts[0].is_zero());
    for w in pts.windows(2) {
        assert_ne!((&w[1] - &w[0]).cmp_exact(&width), Ordering::Greater);
    }
    let top = &pts[pts.len() - 1] + &width;
    assert_eq!(top, FieldElement::one(f.ctx()));
}

#[test]
fn covering_leaves_no_gaps() {
    let numbers: Vec<(Context, u32)> = vec![
        (ctx_for(&[-1, -1, 1]), 1),
        (ctx_for(&[-2, 0, 1]), 1),
        (Arc::new(AlgebraicReal::from_rational(&rat(3, 2))), 1),
        (ctx_for(&[-1, -1, 0, 1]), 1),
        (ctx_for(&[-1, -2, 1]), 2),
        (Arc::new(AlgebraicReal::from_rational(&rat(5, 2))), 2),
    ];
    for (q, m) in numbers {
        let f = HomogeneousIFS::from_q_m(&q, m).unwrap();
        assert!(covering_check(&f));
        let depth = if m == 1 { 6 } else { 5 };
        for n in 1..=depth {
            assert_covers(&f, n);
        }
    }
    // ρ = 1/3 with translations 0 and 2/3 leaves the middle third uncovered
    let ctx: Context = Arc::new(AlgebraicReal::from_integer(3));
    let cantor = HomogeneousIFS::new(
        FieldElement::from_rational(&ctx, &rat(1, 3)),
        vec![FieldElement::zero(&ctx), FieldElement::from_rational(&ctx, &rat(2, 3))],
    )
    .unwrap();
    assert!(!covering_check(&cantor));
    let pts = left_endpoints(cantor.rho(), cantor.translations(), 2).unwrap();
    let width = cantor.rho().pow(2);
    assert!(pts.windows(2).any(|w| (&w[1] - &w[0]).cmp_exact(&width) == Ordering::Greater));
}

#[test]
fn dense_numbers_keep_producing_small_differences() {
    let numbers: Vec<Context> =
        vec![ctx_for(&[-2, 0, 1]), Arc::new(AlgebraicReal::from_rational(&rat(3, 2))), ctx_for(&[-2, 0, 0, 1])];
    for q in numbers {
        assert_ne!(classify_number(&q).unwrap().tag, ClassTag::Pisot);
        let f = HomogeneousIFS::from_q_m(&q, 1).unwrap();
        assert!(!build_neighbor_graph(&f, 2000).is_complete());
        let shallow = brute_force_differences(&f, 6).unwrap();
        let deep = brute_force_differences(&f, 9).unwrap();
        assert!(deep.len() > 2 * shallow.len(), "q={}", q.to_f64());
        let smallest = |v: &[FieldElement]| v.iter().find(|d| !d.is_zero()).unwrap().clone();
        assert_eq!(smallest(&deep).cmp_exact(&smallest(&shallow)), Ordering::Less);
    }
    // the Pisot counterpart saturates
    let f = HomogeneousIFS::from_q_m(&ctx_for(&[-1, -1, 1]), 1).unwrap();
    assert_eq!(brute_force_differences(&f, 12).unwrap().len(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transitions_are_symmetric_and_stay_in_range(k in 0usize..9, node in 0usize..64, d in 0usize..64) {
        let (q, m) = small_pisot().swap_remove(k);
        let (f, g) = complete_graph(&q, m);
        let v = &g.nodes[node % g.nodes.len()];
        let deltas = f.differences();
        let delta = &deltas[d % deltas.len()];
        let plus = transition(v, delta, &f).unwrap();
        let minus = transition(&-v, &-delta, &f);
        // v is nonnegative, so -v is only accepted when it is zero
        if v.is_zero() {
            prop_assert_eq!(&minus.unwrap(), &plus);
        }
        if let Transition::Node(w) = plus {
            prop_assert!(w.sign() != pisot_core::algebraic::Sign::Negative);
            prop_assert_eq!(w.cmp_rational(&rat(1, 1)), Ordering::Less);
            prop_assert!(g.nodes.contains(&w));
        }
    }
}
