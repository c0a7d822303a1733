//! Seeded property suites.

mod common;

use common::*;
use cuspcover::algebra::mpoly::vars;
use cuspcover::algebra::parse_in;
use cuspcover::fixtures::tools::graph_from_input;
use cuspcover::fixtures::{model::GraphInput, Kind};
use cuspcover::ring::{find_generators, find_relations, RingOptions};
use cuspcover::sections::SectionEngine;
use cuspcover::topology::{
    edge_determinants, graph_analyze, hj_chain, seifert_data, splice_diagram, star_graph, Arm, ResolutionGraph,
    SeifertData, Vertex,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn runner(seed: u8, cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

#[test]
fn section_space_is_independent_of_the_representation() {
    let roots = keyed_roots();
    runner(1, 32)
        .run(&(0..roots.len(), 1u64..=9, 0usize..4), |(i, n, pick)| {
            let (ctx, root) = &roots[i];
            let eng = SectionEngine::new(ctx, root.clone()).unwrap();
            let reps = representations(root, n, n / root.rho as u64 + root.a_units as u64 + 1);
            let (m, q) = reps[pick % reps.len()];
            let a = eng.section_space(n).unwrap();
            let b = eng.section_space_with(n, m, q).unwrap();
            prop_assert!(same_span(&a.basis, &b.basis, a.degree), "n={} (m,q)=({},{})", n, m, q);
            Ok(())
        })
        .unwrap();
}

#[test]
fn roots_agree_across_keys_and_routes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    root_uniqueness(&mut rng, 12).unwrap();
}

#[test]
fn riemann_roch_holds_in_nonspecial_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    riemann_roch(&mut rng, 24).unwrap();
    // the duality residual is enforced by hilbert_table itself
    for (ctx, root) in keyed_roots() {
        let t = SectionEngine::new(&ctx, root).unwrap().hilbert_table(12).unwrap();
        assert!(t.rows.iter().all(|r| r.residual == 0));
    }
}

#[test]
fn gorenstein_numerators_are_palindromic() {
    for (ctx, root) in keyed_roots().into_iter().take(2) {
        let eng = SectionEngine::new(&ctx, root).unwrap();
        for reverse in [false, true] {
            let model = find_generators(&eng, 6, reverse).unwrap();
            let pres = find_relations(&model, &eng, &RingOptions { max_degree: 12, reverse, patience: 0 }).unwrap();
            assert!(!pres.hilbert_numerator.is_empty(), "{}", ctx.curve.name());
            assert!(pres.palindromic, "{}: {:?}", ctx.curve.name(), pres.hilbert_numerator);
            assert_eq!(pres.relations.len(), 9);
        }
    }
}

#[test]
fn reduced_groebner_basis_is_canonical_under_shuffles() {
    let v = vars(&[("x", 2), ("y", 3), ("z", 4), ("w", 5)]);
    let gens: Vec<_> = ["x^3*z - y^2*x^2 + w^2", "y*w - z^2 + x^4", "x*w - y*z", "x^2*y - w"]
        .iter()
        .map(|t| parse_in(t, &v).unwrap())
        .collect();
    for seed in [11u64, 12, 13] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        gb_canonicity(&mut rng, &v, &gens, 8).unwrap();
    }
}

fn graph_fixtures() -> Vec<(String, ResolutionGraph)> {
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
fn edge_determinant_identity_on_all_graphs() {
    let mut checked = 0;
    for (id, g) in graph_fixtures() {
        let Ok(sd) = splice_diagram(&g) else { continue };
        for e in edge_determinants(&g, &sd) {
            assert!(e.holds(), "{id}: {} vs {}", e.lhs, e.rhs);
            checked += 1;
        }
    }
    assert!(checked >= 4, "only {checked} node-to-node edges");
}

fn permuted(g: &ResolutionGraph, perm: &[usize]) -> ResolutionGraph {
    let vs: Vec<Vertex> = perm.iter().map(|&i| g.vertices()[i].clone()).collect();
    let es: Vec<(String, String)> =
        g.edges().iter().map(|&(a, b)| (g.vertices()[b].id.clone(), g.vertices()[a].id.clone())).collect();
    ResolutionGraph::new(vs, es).unwrap()
}

#[test]
fn determinant_is_independent_of_vertex_order() {
    let graphs = graph_fixtures();
    runner(4, 48)
        .run(&(0..graphs.len(), any::<u64>()), |(i, seed)| {
            let (id, g) = &graphs[i];
            let mut perm: Vec<usize> = (0..g.vertices().len()).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rand::seq::SliceRandom::shuffle(&mut perm[..], &mut rng);
            let h = permuted(g, &perm);
            prop_assert_eq!(graph_analyze(g).determinant, graph_analyze(&h).determinant, "{}", id);
            Ok(())
        })
        .unwrap();
}

fn arm() -> impl Strategy<Value = Arm> {
    (2u64..=17).prop_flat_map(|alpha| {
        (1..alpha).prop_filter_map("coprime", move |beta| {
            (num_integer::gcd(alpha, beta) == 1).then_some(Arm { alpha, beta })
        })
    })
}

#[test]
fn star_graphs_reanalyze_to_their_seifert_data() {
    let strategy = (prop::collection::vec(arm(), 3..=5), 0i64..4).prop_map(|(arms, extra)| SeifertData {
        central_weight: -(arms.len() as i64) - extra,
        central_genus: 0,
        arms,
    });
    runner(5, 64)
        .run(&strategy, |data| {
            let g = star_graph(&data).expect("e < 0 gives a definite star");
            let back = seifert_data(&g).expect("star-shaped");
            let key = |s: &SeifertData| {
                let mut a: Vec<(u64, u64)> = s.arms.iter().map(|a| (a.alpha, a.beta)).collect();
                a.sort();
                (s.central_weight, a)
            };
            prop_assert_eq!(key(&back), key(&data));
            let chain_len: usize = data.arms.iter().map(|a| hj_chain(a.alpha, a.beta).unwrap().len()).sum();
            prop_assert_eq!(g.vertices().len(), 1 + chain_len);
            Ok(())
        })
        .unwrap();
}
