//! Engine values against independent oracles: semigroup counts on monomial
//! curves, Riemann-Roch on the cuspidal cubic, tree determinants by leaf
//! pruning, adjunction by hand and the Milnor product.

mod common;

use std::collections::BTreeMap;

use common::*;
use cuspcover::fixtures::model::GraphInput;
use cuspcover::fixtures::tools::{self, graph_from_input};
use cuspcover::fixtures::Kind;
use cuspcover::topology::{brieskorn_seifert, canonical_cycle, graph_analyze, laufer_durfee_sw, star_graph, ResolutionGraph};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn in_semigroup(v: u64, gens: &[u64]) -> bool {
    let mut reach = vec![false; v as usize + 1];
    reach[0] = true;
    for k in 1..=v as usize {
        reach[k] = gens.iter().any(|&g| g as usize <= k && reach[k - g as usize]);
    }
    reach[v as usize]
}

/// h⁰ on a monomial curve: monomials s^a t^b, a + b = N, with b in the
/// semigroup at t = 0 and a in the semigroup at s = 0.
fn monomial_count(big_n: u64, at_t0: &[u64], at_s0: &[u64]) -> usize {
    (0..=big_n).filter(|&b| in_semigroup(b, at_t0) && in_semigroup(big_n - b, at_s0)).count()
}

fn engine_dims(id: &str, range: (u64, u64)) -> Vec<usize> {
    let corpus = corpus();
    let fx = corpus.get(id).unwrap();
    tools::sections(&corpus, fx, range).unwrap().iter().map(|r| r.dim).collect()
}

#[test]
fn semigroup_gaps_of_three_four() {
    let gaps: Vec<u64> = (1..12).filter(|&k| !in_semigroup(k, &[3, 4])).collect();
    assert_eq!(gaps, vec![1, 2, 5]);
}

#[test]
fn cstar_quartic_matches_the_monomial_count() {
    // (t s^3, s^4, t^4): smooth at t = 0, semigroup <3,4> at s = 0; N = n
    let oracle: Vec<usize> = (0..=8).map(|n| monomial_count(n, &[1], &[3, 4])).collect();
    assert_eq!(engine_dims("quartic-e6-cstar", (0, 8)), oracle);
    assert_eq!(oracle[..6], [1, 1, 1, 2, 3, 3]);
}

#[test]
fn e12_monomial_curve_matches_the_monomial_count() {
    // t-orders 3,6,9,7,10 at t = 0 and a smooth point at s = 0
    let oracle: Vec<usize> = (0..=10).map(|n| monomial_count(n, &[3, 7], &[1])).collect();
    assert_eq!(engine_dims("canonical-e12-monomial", (0, 10)), oracle);
    assert_eq!(oracle[5], 2);
    assert_eq!(oracle[0] + oracle[5] + oracle[10], 9);
}

#[test]
fn cuspidal_cubic_qdivisor_follows_riemann_roch() {
    // genus 1, D = P - Q1/3 - Q2/3, 2P ~ Q1 + Q2: deg⌊nD⌋ = n - 2⌈n/3⌉, and
    // a degree-0 floor is n/2 (2P - Q1 - Q2) ~ 0
    let oracle: Vec<usize> = (0..=15u64)
        .map(|n| {
            let deg = n as i64 - 2 * n.div_ceil(3) as i64;
            match deg {
                d if d > 0 => d as usize,
                0 => 1,
                _ => 0,
            }
        })
        .collect();
    assert_eq!(engine_dims("cubic-qdivisor", (0, 15)), oracle);
}

/// det(−M) of a tree by pruning leaves toward a root.
fn pruned_determinant(g: &ResolutionGraph) -> BigInt {
    let n = g.vertices().len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in g.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut order = vec![0usize];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                order.push(w);
            }
        }
        i += 1;
    }
    let mut value: Vec<BigRational> = g.vertices().iter().map(|v| BigRational::from_integer((-v.weight).into())).collect();
    let mut det = BigRational::one();
    for &v in order.iter().rev() {
        assert!(!value[v].is_zero(), "zero pivot");
        det *= &value[v];
        if parent[v] != usize::MAX {
            let p = parent[v];
            let r = value[v].recip();
            value[p] -= r;
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

fn graphs() -> BTreeMap<String, ResolutionGraph> {
    let corpus = corpus();
    corpus
        .fixtures
        .values()
        .filter(|fx| fx.file.kind == Kind::Graph)
        .filter_map(|fx| {
            let input: GraphInput = fx.input().unwrap();
            graph_from_input(&input).and_then(Result::ok).map(|g| (fx.id().to_string(), g))
        })
        .collect()
}

#[test]
fn tree_determinants_match_leaf_pruning() {
    let all = graphs();
    let mut trees = 0;
    for (id, g) in &all {
        if g.cycle_rank() > 0 {
            continue;
        }
        assert_eq!(graph_analyze(g).determinant, pruned_determinant(g).to_string(), "{id}");
        trees += 1;
    }
    assert!(trees >= 8);
    assert_eq!(pruned_determinant(&all["graph-a6-double"]), BigInt::from(14));
    assert_eq!(pruned_determinant(&all["graph-intro"]), BigInt::from(3));
    assert_eq!(pruned_determinant(&all["graph-cuspprop"]), BigInt::from(1));
}

#[test]
fn cut_off_arms_of_the_sixteen_star_have_determinants_4_3_16() {
    let g = star_graph(&brieskorn_seifert([4, 3, 16]).unwrap()).unwrap();
    let data = cuspcover::topology::seifert_data(&g).unwrap();
    let mut alphas: Vec<u64> = data.arms.iter().map(|a| a.alpha).collect();
    alphas.sort();
    assert_eq!(alphas, vec![3, 4, 16]);
}

#[test]
fn canonical_cycles_solve_adjunction_by_hand() {
    let all = graphs();
    // single vertex C, C² = −2, g = 6: k·C² = 2g − 2 − C²
    let k = canonical_cycle(&all["graph-genus6-single"]);
    let c = BigRational::from_integer(BigInt::from(12)) / BigRational::from_integer(BigInt::from(-2));
    assert_eq!(k.cycle.coefficients[0].1, c);
    assert_eq!(k.k_squared, &c * &c * BigRational::from_integer(BigInt::from(-2)));
    // Laufer chain: check (K + Ei)·Ei = 2gi − 2 with K = −3E0 − 2E1 − E2
    let g = &all["graph-laufer"];
    let m = g.intersection_matrix();
    let kv = [-3i64, -2, -1];
    for i in 0..3 {
        let ke: i64 = (0..3).map(|j| kv[j] * m[j][i]).sum();
        let genus = g.vertices()[i].genus as i64;
        assert_eq!(ke + m[i][i], 2 * genus - 2);
    }
    let got: Vec<String> = canonical_cycle(g).cycle.coefficients.iter().map(|(_, c)| c.to_string()).collect();
    assert_eq!(got, vec!["-3", "-2", "-1"]);
}

#[test]
fn laufer_formula_reproduces_the_milnor_product() {
    let g = star_graph(&brieskorn_seifert([4, 3, 13]).unwrap()).unwrap();
    let ld = laufer_durfee_sw(&g, 8, None);
    assert_eq!(ld.mu, BigRational::from_integer(BigInt::from(3 * 2 * 12)));
    assert_eq!(ld.k_squared, BigRational::from_integer(BigInt::from(-29)));
}
