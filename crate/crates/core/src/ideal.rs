//! Gröbner bases over ℚ for weighted polynomial rings: normal forms,
//! membership, elimination, saturation and subring expressions.
//!
//! Coefficients are kept integral during the run (fraction-free reduction
//! with content stripping). Pairs are selected by sugar and pruned with the
//! Gebauer–Möller criteria.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::mpoly::Vars;
use crate::algebra::rational::common_denominator;
use crate::algebra::{AlgebraError, MultiPoly, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("budget exceeded: {reason} (pairs {pairs}, sugar {sugar})")]
    Budget { reason: String, pairs: usize, sugar: u64 },
    #[error("polynomials live in different rings: {0}")]
    VariableMismatch(String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("cannot saturate by the zero polynomial")]
    ZeroSaturation,
    #[error("no expression in {vars} exists; normal form is {normal_form}")]
    NoExpression { vars: String, normal_form: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Weighted degree, ties broken reverse lexicographically.
    #[default]
    Grevlex,
    /// The named block is ordered strictly above the remaining variables;
    /// each part is weighted grevlex on its own.
    Elimination { block: Vec<String> },
    Lex,
}

/// Resource caps for a single run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_sugar: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 200_000, max_sugar: 400 }
    }
}

impl Budget {
    pub fn pairs(max_pairs: usize) -> Self {
        Budget { max_pairs, ..Budget::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GbStats {
    pub pairs: usize,
    pub zero_reductions: usize,
    pub max_sugar: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdealBasis {
    pub vars: Vars,
    pub generators: Vec<MultiPoly>,
    pub order: MonomialOrder,
    pub groebner: bool,
    pub stats: GbStats,
}

impl IdealBasis {
    pub fn new(vars: &Vars, generators: Vec<MultiPoly>, order: MonomialOrder) -> Result<Self, IdealError> {
        for g in &generators {
            if g.vars() != vars {
                return Err(IdealError::VariableMismatch(format!("generator {g}")));
            }
        }
        Ok(IdealBasis { vars: vars.clone(), generators, order, groebner: false, stats: GbStats::default() })
    }

    /// True for the unit ideal (a Gröbner basis containing a constant).
    pub fn is_unit(&self) -> bool {
        self.groebner && self.generators.iter().any(|g| !g.is_zero() && g.terms().keys().all(|e| e.iter().all(|k| *k == 0)))
    }
}

type Mono = Vec<u32>;
type Poly = Vec<(Mono, BigInt)>;

/// Variable permutation plus block structure of an order.
struct Ring {
    /// internal index → external index
    perm: Vec<usize>,
    weights: Vec<u32>,
    blocks: Vec<(usize, usize)>,
}

impl Ring {
    fn new(vars: &Vars, order: &MonomialOrder) -> Result<Self, IdealError> {
        let n = vars.len();
        let (perm, blocks) = match order {
            MonomialOrder::Grevlex => ((0..n).collect(), vec![(0, n)]),
            MonomialOrder::Lex => ((0..n).collect(), (0..n).map(|i| (i, i + 1)).collect()),
            MonomialOrder::Elimination { block } => {
                let mut first = Vec::new();
                for name in block {
                    let i = vars.iter().position(|v| &v.name == name).ok_or_else(|| IdealError::UnknownVariable(name.clone()))?;
                    if !first.contains(&i) {
                        first.push(i);
                    }
                }
                first.sort_unstable();
                let k = first.len();
                let rest: Vec<usize> = (0..n).filter(|i| !first.contains(i)).collect();
                first.extend(rest);
                (first, vec![(0, k), (k, n)])
            }
        };
        let weights = perm.iter().map(|&i| vars[i].weight).collect();
        Ok(Ring { perm, weights, blocks })
    }

    fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        for &(lo, hi) in &self.blocks {
            let wa: u64 = (lo..hi).map(|i| a[i] as u64 * self.weights[i] as u64).sum();
            let wb: u64 = (lo..hi).map(|i| b[i] as u64 * self.weights[i] as u64).sum();
            match wa.cmp(&wb) {
                Ordering::Equal => {}
                o => return o,
            }
            for i in (lo..hi).rev() {
                match a[i].cmp(&b[i]) {
                    Ordering::Equal => {}
                    o => return o.reverse(),
                }
            }
        }
        Ordering::Equal
    }

    fn wdeg(&self, m: &[u32]) -> u64 {
        m.iter().zip(&self.weights).map(|(e, w)| *e as u64 * *w as u64).sum()
    }

    fn import(&self, p: &MultiPoly) -> Poly {
        let den = common_denominator(p.terms().values());
        let mut out: Poly = p
            .terms()
            .iter()
            .map(|(e, c)| {
                let m: Mono = self.perm.iter().map(|&i| e[i]).collect();
                let v = c * Rational::from_integer(den.clone());
                (m, v.to_integer())
            })
            .collect();
        out.sort_by(|a, b| self.cmp(&b.0, &a.0));
        primitive(&mut out);
        out
    }

    fn export(&self, p: &[(Mono, BigInt)], vars: &Vars) -> MultiPoly {
        let lc = p.first().map(|t| t.1.clone()).unwrap_or_else(BigInt::one);
        MultiPoly::from_terms(
            vars,
            p.iter().map(|(m, c)| {
                let mut e = vec![0; m.len()];
                for (k, &i) in self.perm.iter().enumerate() {
                    e[i] = m[k];
                }
                (e, Rational::new(c.clone(), lc.clone()))
            }),
        )
    }
}

fn primitive(p: &mut Poly) {
    let Some(first) = p.first() else { return };
    let mut g = first.1.abs();
    for (_, c) in p.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(c);
    }
    let neg = first.1.is_negative();
    if !g.is_one() || neg {
        let g = if neg { -g } else { g };
        for (_, c) in p.iter_mut() {
            *c = &*c / &g;
        }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn quotient(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn mask(m: &[u32]) -> u64 {
    m.iter().enumerate().fold(0u64, |acc, (i, e)| if *e > 0 { acc | (1 << (i % 64)) } else { acc })
}

/// a·p − b·x^mono·q, merged in descending order.
fn sub_mul(ring: &Ring, p: &[(Mono, BigInt)], a: &BigInt, q: &[(Mono, BigInt)], b: &BigInt, mono: &[u32]) -> Poly {
    let mut out = Vec::with_capacity(p.len() + q.len());
    let mut i = 0;
    let mut j = 0;
    let shifted = |t: &(Mono, BigInt)| -> Mono { t.0.iter().zip(mono).map(|(x, y)| x + y).collect() };
    let mut qj = q.first().map(shifted);
    while i < p.len() || j < q.len() {
        let ord = match (&p.get(i), &qj) {
            (Some(pt), Some(qm)) => ring.cmp(&pt.0, qm),
            (Some(_), None) => Ordering::Greater,
            (None, _) => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push((p[i].0.clone(), a * &p[i].1));
                i += 1;
            }
            Ordering::Less => {
                out.push((qj.take().unwrap(), -(b * &q[j].1)));
                j += 1;
                qj = q.get(j).map(shifted);
            }
            Ordering::Equal => {
                let c = a * &p[i].1 - b * &q[j].1;
                if !c.is_zero() {
                    out.push((p[i].0.clone(), c));
                }
                i += 1;
                j += 1;
                qj = q.get(j).map(shifted);
            }
        }
    }
    out
}

struct Entry {
    p: Poly,
    sugar: u64,
    mask: u64,
}

impl Entry {
    fn lt(&self) -> &Mono {
        &self.p[0].0
    }
}

/// Fully reduce p modulo the listed entries. Returns (remainder, sugar,
/// scale) with remainder ≡ scale·p.
fn reduce(ring: &Ring, mut p: Poly, mut sugar: u64, entries: &[Entry], active: &[usize]) -> (Poly, u64, Rational) {
    let mut done: Poly = Vec::new();
    let mut scale = Rational::one();
    while !p.is_empty() {
        let (m, c) = (&p[0].0, &p[0].1);
        let mk = mask(m);
        let divisor = active.iter().map(|&k| &entries[k]).find(|e| e.mask & !mk == 0 && divides(e.lt(), m));
        match divisor {
            Some(e) => {
                let lc = &e.p[0].1;
                let g = c.gcd(lc);
                let a = lc / &g;
                let b = c / &g;
                let mono = quotient(m, e.lt());
                sugar = sugar.max(e.sugar + ring.wdeg(&mono));
                let rest = sub_mul(ring, &p[1..], &a, &e.p[1..], &b, &mono);
                if !a.is_one() {
                    for t in done.iter_mut() {
                        t.1 *= &a;
                    }
                    scale *= Rational::from_integer(a);
                }
                p = rest;
            }
            None => {
                let t = p.remove(0);
                done.push(t);
            }
        }
        if done.len() + p.len() > 0 && (done.len() + p.len()) % 64 == 0 {
            strip_content(&mut done, &mut p, &mut scale);
        }
    }
    strip_content(&mut done, &mut p, &mut scale);
    (done, sugar, scale)
}

fn strip_content(done: &mut Poly, p: &mut Poly, scale: &mut Rational) {
    let mut g = BigInt::zero();
    for (_, c) in done.iter().chain(p.iter()) {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, c) in done.iter_mut().chain(p.iter_mut()) {
        *c = &*c / &g;
    }
    *scale /= Rational::from_integer(g);
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u64,
}

struct Engine<'a> {
    ring: &'a Ring,
    entries: Vec<Entry>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    stats: GbStats,
}

impl Engine<'_> {
    fn pair(&self, i: usize, j: usize) -> Pair {
        let (a, b) = (&self.entries[i], &self.entries[j]);
        let l = lcm(a.lt(), b.lt());
        let w = self.ring.wdeg(&l);
        let sugar = (a.sugar + w - self.ring.wdeg(a.lt())).max(b.sugar + w - self.ring.wdeg(b.lt()));
        Pair { i, j, lcm: l, sugar }
    }

    /// Gebauer–Möller update for a new element h.
    fn insert(&mut self, p: Poly, sugar: u64) {
        let h = self.entries.len();
        let m = mask(&p[0].0);
        self.entries.push(Entry { p, sugar, mask: m });
        let lth = self.entries[h].lt().clone();

        let mut c: std::collections::VecDeque<(Pair, bool)> =
            self.active.iter().map(|&g| (self.pair(g, h), coprime(self.entries[g].lt(), &lth))).collect();
        let mut d: Vec<(Pair, bool)> = Vec::new();
        while let Some((p, disjoint)) = c.pop_front() {
            let dominated = c.iter().chain(d.iter()).any(|(q, _)| divides(&q.lcm, &p.lcm));
            if disjoint || !dominated {
                d.push((p, disjoint));
            }
        }
        let new_pairs: Vec<Pair> = d.into_iter().filter(|(_, disjoint)| !disjoint).map(|(p, _)| p).collect();
        let entries = &self.entries;
        self.pairs.retain(|p| {
            if !divides(&lth, &p.lcm) {
                return true;
            }
            let l1 = lcm(entries[p.i].lt(), &lth);
            let l2 = lcm(entries[p.j].lt(), &lth);
            l1 == p.lcm || l2 == p.lcm
        });
        self.pairs.extend(new_pairs);
        self.active.retain(|&g| !divides(&lth, entries[g].lt()));
        self.active.push(h);
    }

    fn next_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ring = self.ring;
        let best = (0..self.pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
                pa.sugar.cmp(&pb.sugar).then_with(|| ring.cmp(&pa.lcm, &pb.lcm))
            })
            .unwrap();
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, pr: &Pair) -> Poly {
        let (a, b) = (&self.entries[pr.i], &self.entries[pr.j]);
        let (ca, cb) = (&a.p[0].1, &b.p[0].1);
        let g = ca.gcd(cb);
        let fa = cb / &g;
        let fb = ca / &g;
        let ma = quotient(&pr.lcm, a.lt());
        let mb = quotient(&pr.lcm, b.lt());
        let left: Poly = a.p[1..].iter().map(|(m, c)| (m.iter().zip(&ma).map(|(x, y)| x + y).collect(), c * &fa)).collect();
        sub_mul(self.ring, &left, &BigInt::one(), &b.p[1..], &fb, &mb)
    }
}

fn run(ring: &Ring, gens: Vec<Poly>, budget: &Budget) -> Result<(Vec<Poly>, GbStats), IdealError> {
    let mut eng = Engine { ring, entries: Vec::new(), active: Vec::new(), pairs: Vec::new(), stats: GbStats::default() };
    let mut gens: Vec<Poly> = gens.into_iter().filter(|g| !g.is_empty()).collect();
    gens.sort_by(|a, b| ring.cmp(&a[0].0, &b[0].0));
    for g in gens {
        let s = g.iter().map(|t| ring.wdeg(&t.0)).max().unwrap();
        let (r, sugar, _) = reduce(ring, g, s, &eng.entries, &eng.active);
        if !r.is_empty() {
            eng.insert(r, sugar);
        }
    }
    while let Some(pr) = eng.next_pair() {
        eng.stats.pairs += 1;
        eng.stats.max_sugar = eng.stats.max_sugar.max(pr.sugar);
        if eng.stats.pairs > budget.max_pairs {
            return Err(IdealError::Budget { reason: "pair limit".into(), pairs: eng.stats.pairs, sugar: pr.sugar });
        }
        if pr.sugar > budget.max_sugar {
            return Err(IdealError::Budget { reason: "degree limit".into(), pairs: eng.stats.pairs, sugar: pr.sugar });
        }
        let s = eng.spoly(&pr);
        if s.is_empty() {
            eng.stats.zero_reductions += 1;
            continue;
        }
        let (r, sugar, _) = reduce(ring, s, pr.sugar, &eng.entries, &eng.active);
        if r.is_empty() {
            eng.stats.zero_reductions += 1;
            continue;
        }
        if r[0].0.iter().all(|e| *e == 0) {
            return Ok((vec![vec![(r[0].0.clone(), BigInt::one())]], eng.stats));
        }
        eng.insert(r, sugar);
    }
    // interreduce the minimal basis
    let mut minimal: Vec<usize> = eng.active.clone();
    minimal.sort_by(|&a, &b| ring.cmp(eng.entries[a].lt(), eng.entries[b].lt()));
    let mut out: Vec<Poly> = Vec::new();
    for (k, &idx) in minimal.iter().enumerate() {
        let others: Vec<usize> = minimal.iter().enumerate().filter(|(o, _)| *o != k).map(|(_, &i)| i).collect();
        let (fixed, _, _) = reduce_tail(ring, &eng.entries[idx].p, &eng.entries, &others);
        out.push(fixed);
    }
    Ok((out, eng.stats))
}

/// Reduce only the non-leading terms of p, keeping the lead.
fn reduce_tail(ring: &Ring, p: &[(Mono, BigInt)], entries: &[Entry], active: &[usize]) -> (Poly, u64, Rational) {
    let lead = p[0].clone();
    let (tail, sugar, scale) = reduce(ring, p[1..].to_vec(), 0, entries, active);
    // tail ≡ scale·(p − lead); so scale·p ≡ scale·lead + tail
    let n = scale.numer().clone();
    let d = scale.denom().clone();
    let mut out: Poly = vec![(lead.0, lead.1 * &n)];
    out.extend(tail.into_iter().map(|(m, c)| (m, c * &d)));
    primitive(&mut out);
    (out, sugar, scale)
}

pub fn groebner_basis(ideal: &IdealBasis, budget: &Budget) -> Result<IdealBasis, IdealError> {
    if ideal.groebner {
        return Ok(ideal.clone());
    }
    let ring = Ring::new(&ideal.vars, &ideal.order)?;
    let gens: Vec<Poly> = ideal.generators.iter().map(|g| ring.import(g)).collect();
    let (basis, stats) = run(&ring, gens, budget)?;
    let mut generators: Vec<MultiPoly> = basis.iter().map(|p| ring.export(p, &ideal.vars)).collect();
    let keys: Vec<Mono> = basis.iter().map(|p| p[0].0.clone()).collect();
    let mut idx: Vec<usize> = (0..generators.len()).collect();
    idx.sort_by(|&a, &b| ring.cmp(&keys[a], &keys[b]));
    generators = idx.into_iter().map(|i| generators[i].clone()).collect();
    Ok(IdealBasis { vars: ideal.vars.clone(), generators, order: ideal.order.clone(), groebner: true, stats })
}

/// Unique remainder of p modulo a Gröbner basis.
pub fn normal_form(p: &MultiPoly, gb: &IdealBasis) -> Result<MultiPoly, IdealError> {
    if p.vars() != &gb.vars {
        return Err(IdealError::VariableMismatch(format!("{p}")));
    }
    assert!(gb.groebner, "normal_form needs a Gröbner basis");
    if p.is_zero() {
        return Ok(p.clone());
    }
    let ring = Ring::new(&gb.vars, &gb.order)?;
    let entries: Vec<Entry> = gb
        .generators
        .iter()
        .map(|g| {
            let p = ring.import(g);
            let m = mask(&p[0].0);
            Entry { p, sugar: 0, mask: m }
        })
        .collect();
    let active: Vec<usize> = (0..entries.len()).collect();
    // import scales p by its content; undo that at the end
    let den = common_denominator(p.terms().values());
    let mut raw: Poly = p
        .terms()
        .iter()
        .map(|(e, c)| (ring.perm.iter().map(|&i| e[i]).collect(), (c * Rational::from_integer(den.clone())).to_integer()))
        .collect();
    raw.sort_by(|a, b| ring.cmp(&b.0, &a.0));
    let (r, _, scale) = reduce(&ring, raw, 0, &entries, &active);
    let factor = (scale * Rational::from_integer(den)).recip();
    let mut out = MultiPoly::zero(&gb.vars);
    for (m, c) in r {
        let mut e = vec![0; m.len()];
        for (k, &i) in ring.perm.iter().enumerate() {
            e[i] = m[k];
        }
        out.add_term(e, Rational::from_integer(c) * &factor);
    }
    Ok(out)
}

pub fn contains(gb: &IdealBasis, p: &MultiPoly) -> Result<bool, IdealError> {
    Ok(normal_form(p, gb)?.is_zero())
}

fn sub_vars(vars: &Vars, keep: &[usize]) -> Vars {
    keep.iter().map(|&i| vars[i].clone()).collect::<Vec<Var>>().into()
}

fn restrict(p: &MultiPoly, keep: &[usize], target: &Vars) -> MultiPoly {
    MultiPoly::from_terms(target, p.terms().iter().map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c.clone())))
}

/// I ∩ k[remaining variables], as a Gröbner basis for grevlex there.
pub fn eliminate(ideal: &IdealBasis, block: &[&str], budget: &Budget) -> Result<IdealBasis, IdealError> {
    let order = MonomialOrder::Elimination { block: block.iter().map(|s| s.to_string()).collect() };
    let gb = groebner_basis(&IdealBasis::new(&ideal.vars, ideal.generators.clone(), order)?, budget)?;
    let blocked: Vec<usize> = block
        .iter()
        .map(|n| ideal.vars.iter().position(|v| v.name == *n).ok_or_else(|| IdealError::UnknownVariable(n.to_string())))
        .collect::<Result<_, _>>()?;
    let keep: Vec<usize> = (0..ideal.vars.len()).filter(|i| !blocked.contains(i)).collect();
    let target = sub_vars(&ideal.vars, &keep);
    let generators: Vec<MultiPoly> = gb
        .generators
        .iter()
        .filter(|g| g.terms().keys().all(|e| blocked.iter().all(|&b| e[b] == 0)))
        .map(|g| restrict(g, &keep, &target))
        .collect();
    let mut out = IdealBasis::new(&target, generators, MonomialOrder::Grevlex)?;
    out.stats = gb.stats;
    groebner_basis(&out, budget)
}

/// I : f^∞ by adjoining a tag variable T with T·f − 1.
pub fn saturate(ideal: &IdealBasis, f: &MultiPoly, budget: &Budget) -> Result<IdealBasis, IdealError> {
    if f.is_zero() {
        return Err(IdealError::ZeroSaturation);
    }
    let mut tag = String::from("T_sat");
    while ideal.vars.iter().any(|v| v.name == tag) {
        tag.push('_');
    }
    let mut all: Vec<Var> = vec![Var { name: tag.clone(), weight: 1 }];
    all.extend(ideal.vars.iter().cloned());
    let big: Vars = all.into();
    let mut gens: Vec<MultiPoly> = ideal.generators.iter().map(|g| g.embed(&big)).collect::<Result<_, _>>()?;
    let tf = &MultiPoly::var_at(&big, 0) * &f.embed(&big)?;
    gens.push(&tf - &MultiPoly::one(&big));
    let ext = IdealBasis::new(&big, gens, MonomialOrder::Grevlex)?;
    let out = eliminate(&ext, &[tag.as_str()], budget)?;
    // same variable list object as the input
    let generators = out.generators.iter().map(|g| g.embed(&ideal.vars)).collect::<Result<_, _>>()?;
    Ok(IdealBasis { vars: ideal.vars.clone(), generators, order: MonomialOrder::Grevlex, groebner: true, stats: out.stats })
}

/// Find q in the named subring with p − q ∈ I.
pub fn express_in_subring(p: &MultiPoly, ideal: &IdealBasis, sub: &[&str], budget: &Budget) -> Result<MultiPoly, IdealError> {
    for n in sub {
        if !ideal.vars.iter().any(|v| v.name == *n) {
            return Err(IdealError::UnknownVariable(n.to_string()));
        }
    }
    let block: Vec<String> = ideal.vars.iter().filter(|v| !sub.contains(&v.name.as_str())).map(|v| v.name.clone()).collect();
    let gb = groebner_basis(&IdealBasis::new(&ideal.vars, ideal.generators.clone(), MonomialOrder::Elimination { block: block.clone() })?, budget)?;
    let nf = normal_form(p, &gb)?;
    let blocked: Vec<usize> = block.iter().map(|n| ideal.vars.iter().position(|v| &v.name == n).unwrap()).collect();
    let inside = nf.terms().keys().all(|e| blocked.iter().all(|&b| e[b] == 0));
    if !inside {
        return Err(IdealError::NoExpression { vars: sub.join(","), normal_form: nf.to_string() });
    }
    if !contains(&gb, &(p - &nf))? {
        return Err(IdealError::NoExpression { vars: sub.join(","), normal_form: nf.to_string() });
    }
    Ok(nf)
}

/// A basis is reduced if no term of any element is divisible by another
/// element's leading monomial.
pub fn is_reduced(gb: &IdealBasis) -> Result<bool, IdealError> {
    let ring = Ring::new(&gb.vars, &gb.order)?;
    let polys: Vec<Poly> = gb.generators.iter().map(|g| ring.import(g)).collect();
    for (i, p) in polys.iter().enumerate() {
        for (j, q) in polys.iter().enumerate() {
            if i != j && p.iter().any(|(m, _)| divides(&q[0].0, m)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The leading monomial (external exponent order) under the basis' order.
pub fn leading_exponent(p: &MultiPoly, order: &MonomialOrder) -> Result<Option<Vec<u32>>, IdealError> {
    let ring = Ring::new(p.vars(), order)?;
    Ok(p.terms().keys().max_by(|a, b| {
        let pa: Mono = ring.perm.iter().map(|&i| a[i]).collect();
        let pb: Mono = ring.perm.iter().map(|&i| b[i]).collect();
        ring.cmp(&pa, &pb)
    }).cloned())
}

/// Drop generators that lie in the ideal of the others (graded inputs: by
/// increasing degree).
pub fn minimalize(vars: &Vars, gens: &[MultiPoly], budget: &Budget) -> Result<Vec<MultiPoly>, IdealError> {
    let mut sorted: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    sorted.sort_by_key(|g| g.weighted_degree());
    let mut kept: Vec<MultiPoly> = Vec::new();
    for g in sorted {
        if !kept.is_empty() {
            let gb = groebner_basis(&IdealBasis::new(vars, kept.clone(), MonomialOrder::Grevlex)?, budget)?;
            if contains(&gb, &g)? {
                continue;
            }
        }
        kept.push(g);
    }
    Ok(kept)
}

/// Rational solutions of a polynomial system, found by lex bases and
/// back-substitution.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RationalPoints {
    pub points: Vec<Vec<Rational>>,
    /// Some free variable was sampled at 0, 1, −1 rather than solved.
    pub positive_dimensional: bool,
    /// Some univariate eliminant had roots outside ℚ.
    pub irrational: bool,
    /// Lex bases of the positive-dimensional pieces met along the way.
    pub families: Vec<Vec<MultiPoly>>,
}

pub fn rational_points(vars: &Vars, eqs: &[MultiPoly], budget: &Budget) -> Result<RationalPoints, IdealError> {
    let mut out = RationalPoints::default();
    let mut prefix = Vec::new();
    solve_rec(vars, eqs.to_vec(), &mut prefix, &mut out, budget)?;
    out.points.sort();
    out.points.dedup();
    Ok(out)
}

/// Fix the last variable to a value; the result lives on the other variables.
fn fix_last(p: &MultiPoly, target: &Vars, value: &Rational) -> MultiPoly {
    let n = p.vars().len();
    let mut out = MultiPoly::zero(target);
    for (e, c) in p.terms() {
        let mut v = c.clone();
        for _ in 0..e[n - 1] {
            v *= value;
        }
        out.add_term(e[..n - 1].to_vec(), v);
    }
    out
}

fn solve_rec(vars: &Vars, eqs: Vec<MultiPoly>, suffix: &mut Vec<Rational>, out: &mut RationalPoints, budget: &Budget) -> Result<(), IdealError> {
    let eqs: Vec<MultiPoly> = eqs.into_iter().filter(|e| !e.is_zero()).collect();
    if vars.is_empty() {
        // only constants remain
        if eqs.is_empty() {
            let mut pt = suffix.clone();
            pt.reverse();
            out.points.push(pt);
        }
        return Ok(());
    }
    let gb = if eqs.is_empty() {
        IdealBasis { vars: vars.clone(), generators: Vec::new(), order: MonomialOrder::Lex, groebner: true, stats: GbStats::default() }
    } else {
        groebner_basis(&IdealBasis::new(vars, eqs, MonomialOrder::Lex)?, budget)?
    };
    if gb.is_unit() {
        return Ok(());
    }
    let n = vars.len();
    let last = n - 1;
    let target: Vars = vars[..last].to_vec().into();
    let univariate = gb.generators.iter().find(|g| g.terms().keys().all(|e| e[..last].iter().all(|k| *k == 0)));
    let values: Vec<Rational> = match univariate {
        Some(u) => {
            let mut coeffs = vec![Rational::zero(); u.terms().keys().map(|e| e[last] as usize).max().unwrap() + 1];
            for (e, c) in u.terms() {
                coeffs[e[last] as usize] = c.clone();
            }
            let poly = crate::algebra::upoly::UPoly::new(coeffs);
            let roots = poly.rational_roots();
            if poly.squarefree().degree().unwrap_or(0) > roots.len() {
                out.irrational = true;
            }
            roots
        }
        None => {
            out.positive_dimensional = true;
            out.families.push(gb.generators.clone());
            vec![Rational::zero(), Rational::one(), -Rational::one()]
        }
    };
    for v in values {
        let reduced: Vec<MultiPoly> = gb.generators.iter().map(|g| fix_last(g, &target, &v)).collect();
        suffix.push(v);
        solve_rec(&target, reduced, suffix, out, budget)?;
        suffix.pop();
    }
    Ok(())
}

/// One generator of an ideal file: an equation string or a term map.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyEntry {
    Text(String),
    Terms(Vec<TermEntry>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub exp: Vec<u32>,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub c: Rational,
}

/// On-disk ideal: weighted variables, generators and an order descriptor.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealFile {
    pub vars: Vec<Var>,
    pub generators: Vec<PolyEntry>,
    #[serde(default)]
    pub order: MonomialOrder,
}

impl PolyEntry {
    pub fn to_poly(&self, vars: &Vars) -> Result<MultiPoly, IdealError> {
        match self {
            PolyEntry::Text(t) => Ok(crate::algebra::parse_in(t, vars)?),
            PolyEntry::Terms(ts) => {
                let mut p = MultiPoly::zero(vars);
                for t in ts {
                    if t.exp.len() != vars.len() {
                        return Err(AlgebraError::DimensionMismatch { expected: vars.len(), found: t.exp.len() }.into());
                    }
                    p.add_term(t.exp.clone(), t.c.clone());
                }
                Ok(p)
            }
        }
    }

    pub fn from_poly(p: &MultiPoly) -> Self {
        let mut terms: Vec<(&Vec<u32>, &Rational)> = p.terms().iter().collect();
        terms.reverse();
        PolyEntry::Terms(terms.into_iter().map(|(e, c)| TermEntry { exp: e.clone(), c: c.clone() }).collect())
    }
}

impl IdealFile {
    pub fn to_ideal(&self) -> Result<IdealBasis, IdealError> {
        let vars: Vars = self.vars.clone().into();
        let gens = self.generators.iter().map(|g| g.to_poly(&vars)).collect::<Result<Vec<_>, _>>()?;
        IdealBasis::new(&vars, gens, self.order.clone())
    }

    pub fn from_ideal(ideal: &IdealBasis) -> Self {
        IdealFile {
            vars: ideal.vars.to_vec(),
            generators: ideal.generators.iter().map(PolyEntry::from_poly).collect(),
            order: ideal.order.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mpoly::vars;
    use crate::algebra::parse::parse_in;
    use crate::algebra::rat;

    fn ideal(v: &Vars, gens: &[&str], order: MonomialOrder) -> IdealBasis {
        IdealBasis::new(v, gens.iter().map(|g| parse_in(g, v).unwrap()).collect(), order).unwrap()
    }

    #[test]
    fn small_reduced_basis() {
        let v = vars(&[("x", 1), ("y", 1)]);
        let gb = groebner_basis(&ideal(&v, &["x^2 - y", "y^2"], MonomialOrder::Grevlex), &Budget::default()).unwrap();
        assert_eq!(gb.generators.len(), 2);
        assert!(contains(&gb, &parse_in("x^4", &v).unwrap()).unwrap());
        let lin = groebner_basis(&ideal(&v, &["x", "y"], MonomialOrder::Grevlex), &Budget::default()).unwrap();
        assert_eq!(normal_form(&parse_in("x + y + 1", &v).unwrap(), &lin).unwrap(), MultiPoly::one(&v));
    }

    #[test]
    fn parabola_elimination() {
        let v = vars(&[("t", 1), ("x", 1), ("y", 1)]);
        let out = eliminate(&ideal(&v, &["x - t", "y - t^2"], MonomialOrder::Grevlex), &["t"], &Budget::default()).unwrap();
        assert_eq!(out.generators.len(), 1);
        let expected = parse_in("x^2 - y", &out.vars).unwrap();
        let g = &out.generators[0];
        assert!(g == &expected || g == &-&expected);
    }

    #[test]
    fn saturation_removes_component() {
        let v = vars(&[("w", 1), ("x", 1), ("y", 1)]);
        let i = ideal(&v, &["w*x", "w*y"], MonomialOrder::Grevlex);
        let w = MultiPoly::var(&v, "w").unwrap();
        let sat = saturate(&i, &w, &Budget::default()).unwrap();
        let expected = groebner_basis(&ideal(&v, &["x", "y"], MonomialOrder::Grevlex), &Budget::default()).unwrap();
        assert_eq!(sat.generators, expected.generators);
        let again = saturate(&sat, &w, &Budget::default()).unwrap();
        assert_eq!(again.generators, sat.generators);
    }

    #[test]
    fn unit_ideal_and_budget() {
        let v = vars(&[("x", 1), ("y", 1)]);
        let gb = groebner_basis(&ideal(&v, &["x*y - 1", "x"], MonomialOrder::Grevlex), &Budget::default()).unwrap();
        assert!(gb.is_unit());
        let cyclic = ideal(&vars(&[("a", 1), ("b", 1), ("c", 1), ("d", 1)]),
            &["a+b+c+d", "a*b+b*c+c*d+d*a", "a*b*c+b*c*d+c*d*a+d*a*b", "a*b*c*d-1"], MonomialOrder::Grevlex);
        assert!(matches!(groebner_basis(&cyclic, &Budget::pairs(2)), Err(IdealError::Budget { .. })));
        let gb = groebner_basis(&cyclic, &Budget::default()).unwrap();
        assert!(is_reduced(&gb).unwrap());
        assert_eq!(gb.generators.len(), 7);
    }

    #[test]
    fn lex_triangular() {
        let v = vars(&[("x", 1), ("y", 1)]);
        let gb = groebner_basis(&ideal(&v, &["x^2 + y^2 - 5", "x - y - 1"], MonomialOrder::Lex), &Budget::default()).unwrap();
        // y^2 + y - 2 in the last variable
        let uni = parse_in("y^2 + y - 2", &v).unwrap();
        assert!(gb.generators.contains(&uni));
        assert_eq!(normal_form(&parse_in("x", &v).unwrap(), &gb).unwrap(), parse_in("y + 1", &v).unwrap());
        let pts = rational_points(&v, &gb.generators, &Budget::default()).unwrap();
        assert_eq!(pts.points, vec![vec![rat(-1), rat(-2)], vec![rat(2), rat(1)]]);
        assert!(!pts.irrational);
        let circle = ideal(&v, &["x^2 - 2", "y"], MonomialOrder::Lex);
        let none = rational_points(&v, &circle.generators, &Budget::default()).unwrap();
        assert!(none.points.is_empty() && none.irrational);
    }

    #[test]
    fn subring_expression() {
        let v = vars(&[("t", 1), ("a", 2), ("b", 3)]);
        let i = ideal(&v, &["a - t^2", "b - t^3"], MonomialOrder::Grevlex);
        let q = express_in_subring(&parse_in("t^6 + t^4", &v).unwrap(), &i, &["a", "b"], &Budget::default()).unwrap();
        // a³ ≡ b² here, so the normal form picks b² + a²
        assert_eq!(q, parse_in("b^2 + a^2", &v).unwrap());
        assert!(express_in_subring(&parse_in("t", &v).unwrap(), &i, &["a", "b"], &Budget::default()).is_err());
    }
}
