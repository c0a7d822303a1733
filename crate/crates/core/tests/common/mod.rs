#![allow(dead_code)]

use std::path::PathBuf;

use cuspcover::algebra::linalg::span_basis;
use cuspcover::algebra::mpoly::Vars;
use cuspcover::algebra::{rat, BinaryForm, MultiPoly, Rational};
use cuspcover::curve::ParamCurve;
use cuspcover::fixtures::{run_fixture, Corpus, FixtureReport, RunOptions, Status};
use cuspcover::ideal::{groebner_basis, Budget, IdealBasis, MonomialOrder};
use cuspcover::sections::{local_section_space, CurveContext, RootBundleData, SectionEngine};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"))
}

pub fn corpus() -> Corpus {
    Corpus::load(&fixture_dir()).expect("fixture corpus loads")
}

pub fn run(corpus: &Corpus, id: &str, extended: bool) -> FixtureReport {
    let fx = corpus.get(id).unwrap_or_else(|e| panic!("{e}"));
    run_fixture(corpus, fx, &RunOptions { extended, ..RunOptions::default() })
}

/// Failures among the named checks of a fixture; an empty filter means all.
pub fn failures(report: &FixtureReport, checks: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(e) = &report.error {
        out.push(format!("{}: {e}", report.id));
    }
    for c in &report.checks {
        if !checks.is_empty() && !checks.contains(&c.check.as_str()) {
            continue;
        }
        if c.status != Status::Pass {
            out.push(format!("{}.{}: expected {}, measured {}", report.id, c.check, c.expected, c.measured));
        }
    }
    if report.checks.is_empty() && report.error.is_none() {
        out.push(format!("{}: no checks ran", report.id));
    }
    out
}

pub fn f(text: &str) -> BinaryForm {
    BinaryForm::parse(text).unwrap()
}

pub fn curve(name: &str, coords: &[&str]) -> CurveContext {
    CurveContext::new(ParamCurve::new(name, coords.iter().map(|c| f(c)).collect()).unwrap()).unwrap()
}

pub fn e6_bitangent() -> CurveContext {
    curve("e6", &["s*t^3", "t^4", "(s^2-t^2)^2"])
}

pub fn a6_quartic() -> CurveContext {
    curve("a6", &["s^2*t^2", "t^4", "s^4+s*t^3"])
}

pub fn three_cusp() -> CurveContext {
    curve("three-cusp", &["t^2*(s+t)^2", "s^2*(s+t)^2", "s^2*t^2"])
}

pub fn a12_quintic() -> CurveContext {
    curve("a12", &["s^3*t^2+t^5", "s*t^4", "s^5+2*s^2*t^3"])
}

/// (curve, ρ, a, κ, key form) for the keyed root fixtures.
pub fn keyed_roots() -> Vec<(CurveContext, RootBundleData)> {
    vec![
        (e6_bitangent(), RootBundleData::new(4, 3, 4, f("s*(2*s^2-3*t^2)"))),
        (three_cusp(), RootBundleData::new(4, 3, 4, f("(s+2*t)*(2*s+t)*(s-t)"))),
        (a6_quartic(), RootBundleData::new(4, 3, 4, f("4*s^3+3*t^3"))),
        (a12_quintic(), RootBundleData::new(5, 6, 10, f("s^6+12/5*s^3*t^3+4/75*t^6"))),
    ]
}

pub fn same_span(a: &[BinaryForm], b: &[BinaryForm], degree: usize) -> bool {
    if a.is_empty() || b.is_empty() {
        return a.is_empty() && b.is_empty();
    }
    span_basis(a, degree).unwrap() == span_basis(b, degree).unwrap()
}

/// All (m, q) with n = ρm − aq and m ≤ mmax.
pub fn representations(root: &RootBundleData, n: u64, mmax: u64) -> Vec<(u64, u64)> {
    let (rho, a) = (root.rho as u64, root.a_units as u64);
    (0..=mmax)
        .filter(|m| rho * m >= n && (rho * m - n) % a == 0)
        .map(|m| (m, (rho * m - n) / a))
        .collect()
}

/// Ladder spaces agree for a random second representation of n.
pub fn representation_independence(rng: &mut ChaCha8Rng, cases: usize) -> Result<(), String> {
    let roots = keyed_roots();
    for _ in 0..cases {
        let (ctx, root) = &roots[rng.gen_range(0..roots.len())];
        let eng = SectionEngine::new(ctx, root.clone()).map_err(|e| e.to_string())?;
        let n = rng.gen_range(1..=8u64);
        let reps = representations(root, n, n / root.rho as u64 + root.a_units as u64 + 1);
        let (m, q) = reps[rng.gen_range(0..reps.len())];
        let base = eng.section_space(n).map_err(|e| e.to_string())?;
        let other = eng.section_space_with(n, m, q).map_err(|e| e.to_string())?;
        if !same_span(&base.basis, &other.basis, base.degree) {
            return Err(format!("{} n={n}: (m,q)={:?} vs {:?}", ctx.curve.name(), base.representation, (m, q)));
        }
    }
    Ok(())
}

/// Key forms g and g^k (with a·k units, k prime to ρ) define the same root: equal tables,
/// equal to the keyless local route.
pub fn root_uniqueness(rng: &mut ChaCha8Rng, cases: usize) -> Result<(), String> {
    let roots = keyed_roots();
    for _ in 0..cases {
        let (ctx, root) = &roots[rng.gen_range(0..roots.len())];
        let ks: Vec<u32> = (2..=3).filter(|k| num_integer::gcd(*k, root.rho) == 1).collect();
        let k = ks[rng.gen_range(0..ks.len())];
        let nmax = rng.gen_range(4..=9u64);
        let powered = RootBundleData::new(root.rho, root.a_units * k, root.kappa, root.key_form.pow(k));
        let t1 = SectionEngine::new(ctx, root.clone()).and_then(|e| e.hilbert_table(nmax)).map_err(|e| e.to_string())?;
        let t2 = SectionEngine::new(ctx, powered).and_then(|e| e.hilbert_table(nmax)).map_err(|e| e.to_string())?;
        let local: Vec<usize> = (0..=nmax)
            .map(|n| local_section_space(ctx, root.rho, n).map(|s| s.dim()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if t1.dims() != t2.dims() || t1.dims() != local {
            return Err(format!("{} k={k}: {:?} / {:?} / {:?}", ctx.curve.name(), t1.dims(), t2.dims(), local));
        }
    }
    Ok(())
}

/// h⁰(nL) = nℓ − g + 1 whenever nℓ > 2g − 2, under a random reparametrization.
pub fn riemann_roch(rng: &mut ChaCha8Rng, cases: usize) -> Result<(), String> {
    let roots = keyed_roots();
    for _ in 0..cases {
        let (ctx, root) = &roots[rng.gen_range(0..roots.len())];
        let (a, b, c, d) = loop {
            let v: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
            if v[0] * v[3] - v[1] * v[2] != 0 {
                break (v[0], v[1], v[2], v[3]);
            }
        };
        let moved = ctx.curve.reparametrize(&rat(a), &rat(b), &rat(c), &rat(d)).map_err(|e| e.to_string())?;
        let mctx = CurveContext::new(moved).map_err(|e| e.to_string())?;
        let g = mctx.genus as i64;
        let deg = mctx.curve.degree() as i64;
        let rho = root.rho as i64;
        let n = rng.gen_range(0..=12u64);
        let ell = n as i64 * deg / rho;
        let h = local_section_space(&mctx, root.rho, n).map_err(|e| e.to_string())?.dim() as i64;
        if ell > 2 * g - 2 && h != ell - g + 1 {
            return Err(format!("{} n={n}: h0 {h}, expected {}", ctx.curve.name(), ell - g + 1));
        }
        let h_orig = local_section_space(ctx, root.rho, n).map_err(|e| e.to_string())?.dim() as i64;
        if h != h_orig {
            return Err(format!("{} n={n}: reparametrized h0 {h} vs {h_orig}", ctx.curve.name()));
        }
    }
    Ok(())
}

pub fn monic(p: &MultiPoly, order: &MonomialOrder) -> MultiPoly {
    let lead = cuspcover::ideal::leading_exponent(p, order).unwrap().unwrap();
    let c = p.terms()[&lead].clone();
    p.scale(&(Rational::one() / c))
}

fn canonical(gb: &IdealBasis) -> Vec<String> {
    let mut v: Vec<String> = gb.generators.iter().map(|g| monic(g, &gb.order).to_string()).collect();
    v.sort();
    v
}

/// Reduced bases are equal after shuffling generators and adding random
/// combinations of them.
pub fn gb_canonicity(rng: &mut ChaCha8Rng, vars: &Vars, gens: &[MultiPoly], cases: usize) -> Result<(), String> {
    let budget = Budget::default();
    let base = groebner_basis(&IdealBasis::new(vars, gens.to_vec(), MonomialOrder::Grevlex).unwrap(), &budget)
        .map_err(|e| e.to_string())?;
    let want = canonical(&base);
    for _ in 0..cases {
        let mut shuffled = gens.to_vec();
        shuffled.shuffle(rng);
        let i = rng.gen_range(0..shuffled.len());
        let j = rng.gen_range(0..shuffled.len());
        if i != j && shuffled[i].weighted_degree() == shuffled[j].weighted_degree() {
            let c = Rational::from_integer(rng.gen_range(-5i64..=5).into());
            if !c.is_zero() {
                shuffled[i] = &shuffled[i] + &shuffled[j].scale(&c);
            }
        }
        let gb = groebner_basis(&IdealBasis::new(vars, shuffled, MonomialOrder::Grevlex).unwrap(), &budget)
            .map_err(|e| e.to_string())?;
        if canonical(&gb) != want {
            return Err(format!("basis changed under shuffle: {:?} vs {:?}", canonical(&gb), want));
        }
    }
    Ok(())
}
