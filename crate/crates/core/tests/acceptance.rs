//! One line per acceptance criterion, evaluated against the fixture corpus
//! and the seeded property checks.

mod common;

use std::io::Write;

use common::*;
use cuspcover::algebra::mpoly::vars;
use cuspcover::algebra::parse_in;
use cuspcover::fixtures::Corpus;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2024;

struct Line {
    number: usize,
    title: &'static str,
    detail: String,
    problems: Vec<String>,
}

/// Named checks of several fixtures; an empty check list means every check.
fn fixtures_pass(corpus: &Corpus, items: &[(&str, &[&str])], extended: bool) -> Vec<String> {
    items.iter().flat_map(|(id, checks)| failures(&run(corpus, id, extended), checks)).collect()
}

fn measured(corpus: &Corpus, id: &str, check: &str) -> String {
    run(corpus, id, true).checks.iter().find(|c| c.check == check).map(|c| c.measured.to_string()).unwrap_or_default()
}

fn criteria(corpus: &Corpus) -> Vec<Line> {
    let mut out = Vec::new();
    let mut push = |number, title, detail: String, problems| out.push(Line { number, title, detail, problems });

    push(
        1,
        "section dimensions, E6 bitangent quartic",
        format!("h0 = {}, pg = {}", measured(corpus, "quartic-e6-bitangent", "dims"), measured(corpus, "quartic-e6-bitangent", "pg")),
        fixtures_pass(corpus, &[("quartic-e6-bitangent", &["dims", "pg"])], false),
    );

    push(
        2,
        "generator degree multisets and forms",
        "3-cusp, A6, A12 (16, forms), E8 special".into(),
        fixtures_pass(
            corpus,
            &[
                ("ring-three-cusp", &["generatorDegrees", "paperGenerators"]),
                ("ring-a6", &["generatorDegrees", "paperGenerators"]),
                ("ring-a12", &["generatorCount", "generatorDegrees", "generatorForms", "paperGenerators"]),
                ("ring-e8-special", &["generatorDegrees", "paperGenerators"]),
            ],
            false,
        ),
    );

    push(
        3,
        "minimal relation counts",
        "9, 9, 54, 14 (A6 theta), 104, 20, 20, 35; the E6 bitangent theta ring has the 2 displayed equations".into(),
        fixtures_pass(
            corpus,
            &[
                ("ring-e6-bitangent", &["relationCount"]),
                ("ring-three-cusp", &["relationCount"]),
                ("ring-a6", &["relationCount"]),
                ("ring-a6-theta", &["relationCount"]),
                ("ring-e6-theta", &["relationCount", "relations"]),
                ("ring-a12", &["relationCount"]),
                ("ring-e8-special", &["relationCount"]),
                ("ring-four-cusp", &["relationCount"]),
                ("ring-e8-generic-double", &["relationCount"]),
            ],
            false,
        ),
    );

    push(
        4,
        "presentation identities vanish",
        "rolling factors (E6, 3-cusp with 0, us^2, 729s^5), A6 matrix system, 4-cusp complete intersection".into(),
        fixtures_pass(
            corpus,
            &[("id-e6-rolling", &[]), ("id-three-cusp-rolling", &[]), ("id-a6-matrix", &[]), ("id-four-cusp-ci", &[])],
            false,
        ),
    );

    let pg_ids = [
        "quintic-a12",
        "quintic-w12-1",
        "quintic-w12-2",
        "canonical-e12-monomial",
        "canonical-e12-trigonal",
        "canonical-2e6",
        "canonical-e6a6",
        "quintic-e8a4",
    ];
    let pgs: Vec<String> = pg_ids.iter().map(|id| measured(corpus, id, "pg")).collect();
    push(
        5,
        "degree-five pg table",
        format!("A12, W12 x2, E12 monomial, E12 trigonal, 2E6, E6+A6, E8+A4 = {}", pgs.join(", ")),
        fixtures_pass(corpus, &pg_ids.iter().map(|id| (*id, &["pg", "h0"][..])).collect::<Vec<_>>(), false),
    );

    push(
        6,
        "graph determinants",
        "intro graph 3, cuspprop 1, E6 cover chain 1 = Brieskorn(4,3,13)".into(),
        fixtures_pass(
            corpus,
            &[
                ("graph-intro", &["determinant"]),
                ("graph-cuspprop", &["determinant"]),
                ("graph-e6-cover-13", &["determinant", "matchesBrieskorn"]),
            ],
            false,
        ),
    );

    push(
        7,
        "canonical cycles",
        format!(
            "Laufer K^2 {}, minimal graph K {}, genus 6 single vertex K {} (K^2 {})",
            measured(corpus, "graph-laufer", "kSquared"),
            measured(corpus, "graph-verder-minimal", "canonicalCycle"),
            measured(corpus, "graph-genus6-single", "canonicalCycle"),
            measured(corpus, "graph-genus6-single", "kSquared"),
        ),
        fixtures_pass(
            corpus,
            &[
                ("graph-laufer", &["canonicalCycle", "kSquared"]),
                ("graph-verder-minimal", &["canonicalCycle"]),
                ("graph-genus6-single", &["canonicalCycle", "kSquared"]),
            ],
            false,
        ),
    );

    let mut laufer = fixtures_pass(corpus, &[("graph-e6-cover-13", &["kSquared", "mu"])], false);
    let milnor = (4 - 1) * (3 - 1) * (13 - 1);
    if measured(corpus, "graph-e6-cover-13", "mu") != format!("\"{milnor}\"") {
        laufer.push(format!("mu differs from the Milnor product {milnor}"));
    }
    push(8, "Laufer consistency, Brieskorn(4,3,13), pg 8", format!("mu = {milnor}"), laufer);

    push(
        9,
        "splice diagrams and semigroup condition",
        "cuspprop violation 1 not in <2,3>, intro graph violation, one-node stars clean".into(),
        fixtures_pass(
            corpus,
            &[
                ("graph-cuspprop", &["spliceWeights", "semigroupViolations"]),
                ("graph-intro", &["spliceWeights", "semigroupViolations"]),
                ("graph-e6-superisolated", &["semigroupViolations"]),
                ("graph-e6-cover-13", &["semigroupViolations"]),
                ("graph-yomdin-k2", &["semigroupViolations"]),
            ],
            false,
        ),
    );

    push(
        10,
        "Q-divisor ring of the cuspidal cubic",
        "degrees (2,3,9), z^2 = (x^2-y^3)^3".into(),
        fixtures_pass(corpus, &[("ring-cubic-qdivisor", &[]), ("cubic-qdivisor", &[])], false),
    );

    push(
        11,
        "invariant-quotient identities (slow)",
        "cone identity; deformed polynomial in the us^2 ideal".into(),
        fixtures_pass(corpus, &[("id-psi-cone", &[]), ("id-psi-deformed", &[])], true),
    );

    push(
        12,
        "negative controls",
        "corrupted sign fails; exponent 25 holds, 26 fails".into(),
        fixtures_pass(corpus, &[("id-e6-corrupted", &[]), ("id-w12-quotient", &[])], false),
    );

    let mut props = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (name, r) in [
        ("representation independence", representation_independence(&mut rng, 24)),
        ("root uniqueness", root_uniqueness(&mut rng, 8)),
        ("Riemann-Roch", riemann_roch(&mut rng, 16)),
    ] {
        if let Err(e) = r {
            props.push(format!("{name}: {e}"));
        }
    }
    props.extend(fixtures_pass(corpus, &[("ring-e6-bitangent", &["palindromic"]), ("ring-three-cusp", &["palindromic"])], false));
    let v = vars(&[("x", 1), ("y", 1), ("z", 1), ("w", 1)]);
    let gens: Vec<_> = ["x*z - y^2", "y*w - z^2", "x*w - y*z", "x^3 - w^2*y"].iter().map(|t| parse_in(t, &v).unwrap()).collect();
    if let Err(e) = gb_canonicity(&mut rng, &v, &gens, 12) {
        props.push(format!("Groebner canonicity: {e}"));
    }
    push(13, "property suites", format!("seed {SEED:#x}"), props);

    out
}

#[test]
fn acceptance() {
    let corpus = corpus();
    let lines = criteria(&corpus);
    let mut failed = 0;
    // written past the test harness capture so the lines land in the log
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for l in &lines {
        let ok = l.problems.is_empty();
        writeln!(out, "criterion {:>2} {}: {} ({})", l.number, if ok { "PASS" } else { "FAIL" }, l.title, l.detail).unwrap();
        for p in &l.problems {
            writeln!(out, "    {p}").unwrap();
        }
        failed += usize::from(!ok);
    }
    assert_eq!(lines.len(), 13);
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
