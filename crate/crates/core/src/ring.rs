//! Generators and relations of graded section rings, computed degree by
//! degree with exact linear algebra, plus presentation checks and the
//! rolling-factors equation recipe.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::linalg::{span_basis, span_quotient};
use crate::algebra::mpoly::{Exponent, Vars};
use crate::algebra::rational::primitive_integer_vector;
use crate::algebra::{AlgebraError, BinaryForm, MultiPoly, Rational, SparseEchelon, SparseVec, Var};
use crate::sections::{SectionError, SectionSource};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("generators do not span H⁰ in degree {n}: rank {rank}, expected {expected}")]
    NotGenerated { n: u64, rank: usize, expected: usize },
    #[error("generator '{name}' of degree {degree} lies in the span of products of lower generators")]
    NotMinimal { name: String, degree: u64 },
    #[error("generator '{name}' is not a section of degree {degree}")]
    NotASection { name: String, degree: u64 },
    #[error("duplicate generator name '{0}'")]
    DuplicateName(String),
    #[error("generator degrees must be positive ('{0}')")]
    ZeroDegree(String),
    #[error("rolling step {step} of term {term}: entry {entry} is absent from the top row")]
    RollingStep { step: usize, term: usize, entry: String },
    #[error(transparent)]
    Section(#[from] SectionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub name: String,
    pub degree: u64,
    pub form: BinaryForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradedRingModel {
    pub generators: Vec<Generator>,
}

impl GradedRingModel {
    pub fn new(generators: Vec<Generator>) -> Result<Self, RingError> {
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(RingError::ZeroDegree(g.name.clone()));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(RingError::DuplicateName(g.name.clone()));
            }
        }
        Ok(GradedRingModel { generators })
    }

    /// Generator variables weighted by degree.
    pub fn vars(&self) -> Vars {
        self.generators
            .iter()
            .map(|g| Var { name: g.name.clone(), weight: g.degree as u32 })
            .collect::<Vec<_>>()
            .into()
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self.generators.iter().map(|g| g.degree).collect();
        d.sort_unstable();
        d
    }

    pub fn bindings(&self) -> HashMap<String, BinaryForm> {
        self.generators.iter().map(|g| (g.name.clone(), g.form.clone())).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    pub vars: Vars,
    pub relations: Vec<MultiPoly>,
    pub relation_degrees: Vec<u64>,
    /// Coefficients of H(t)·∏(1 − t^{d_i}), lowest degree first; empty when
    /// Riemann–Roch could not close the series.
    pub hilbert_numerator: Vec<i64>,
    /// t^s·N(1/t) = ±N(t) for s = deg N.
    pub palindromic: bool,
    /// Highest degree in which relations were searched.
    pub searched_to: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingOptions {
    pub max_degree: u64,
    /// Reverse the monomial and coefficient tie-breaks.
    pub reverse: bool,
    /// Stop once no new relation appeared for this many degrees past twice
    /// the top generator degree; zero disables the early stop.
    pub patience: u64,
}

impl RingOptions {
    pub fn up_to(max_degree: u64) -> Self {
        RingOptions { max_degree, reverse: false, patience: 0 }
    }
}

fn swap_st(f: &BinaryForm) -> BinaryForm {
    let mut c = f.coeffs().to_vec();
    c.reverse();
    BinaryForm::new(c)
}

/// Section bases for degrees 0..=max, fetched once.
struct Pieces<'a> {
    src: &'a dyn SectionSource,
    cache: HashMap<u64, Vec<BinaryForm>>,
}

impl<'a> Pieces<'a> {
    fn new(src: &'a dyn SectionSource) -> Self {
        Pieces { src, cache: HashMap::new() }
    }

    fn get(&mut self, n: u64) -> Result<&Vec<BinaryForm>, RingError> {
        if !self.cache.contains_key(&n) {
            let b = if n == 0 { vec![BinaryForm::one()] } else { self.src.sections(n)? };
            self.cache.insert(n, b);
        }
        Ok(&self.cache[&n])
    }
}

/// Span of g_i·H⁰(n − d_i) over the generators found so far.
fn product_span(gens: &[Generator], pieces: &mut Pieces, n: u64, degree: usize) -> Result<Vec<BinaryForm>, RingError> {
    let mut prods = Vec::new();
    for g in gens.iter().filter(|g| g.degree <= n) {
        for f in pieces.get(n - g.degree)?.clone() {
            prods.push(&g.form * &f);
        }
    }
    Ok(span_basis(&prods, degree)?)
}

/// Minimal generators through max_degree, named x1, x2, ... in order.
pub fn find_generators(src: &dyn SectionSource, max_degree: u64, reverse: bool) -> Result<GradedRingModel, RingError> {
    let mut pieces = Pieces::new(src);
    let mut gens: Vec<Generator> = Vec::new();
    for n in 1..=max_degree {
        let degree = src.form_degree(n);
        let h = pieces.get(n)?.clone();
        if h.is_empty() {
            continue;
        }
        let prods = product_span(&gens, &mut pieces, n, degree)?;
        let new = if reverse {
            let h2: Vec<BinaryForm> = h.iter().map(swap_st).collect();
            let p2: Vec<BinaryForm> = prods.iter().map(swap_st).collect();
            span_quotient(&h2, &p2, degree)?.iter().map(swap_st).collect()
        } else {
            span_quotient(&h, &prods, degree)?
        };
        for f in new {
            let name = format!("x{}", gens.len() + 1);
            gens.push(Generator { name, degree: n, form: f });
        }
    }
    GradedRingModel::new(gens)
}

/// Check that given generators are sections, are minimal and generate
/// through max_degree.
pub fn check_generators(model: &GradedRingModel, src: &dyn SectionSource, max_degree: u64) -> Result<(), RingError> {
    let mut pieces = Pieces::new(src);
    let mut sorted = model.generators.clone();
    sorted.sort_by_key(|g| g.degree);
    for n in 1..=max_degree {
        let degree = src.form_degree(n);
        let lower: Vec<Generator> = sorted.iter().filter(|g| g.degree < n).cloned().collect();
        let prods = product_span(&lower, &mut pieces, n, degree)?;
        let h = pieces.get(n)?.clone();
        let mut acc = prods.clone();
        for g in sorted.iter().filter(|g| g.degree == n) {
            if g.form.degree() != degree || !crate::algebra::linalg::span_contains(&h, &g.form)? {
                return Err(RingError::NotASection { name: g.name.clone(), degree: n });
            }
            let before = acc.len();
            acc.push(g.form.clone());
            acc = span_basis(&acc, degree)?;
            if acc.len() == before {
                return Err(RingError::NotMinimal { name: g.name.clone(), degree: n });
            }
        }
        if acc.len() != h.len() {
            return Err(RingError::NotGenerated { n, rank: acc.len(), expected: h.len() });
        }
    }
    Ok(())
}

/// Weighted monomials of degree n, in a fixed enumeration order.
fn monomials(weights: &[u64], n: u64) -> Vec<Exponent> {
    fn rec(weights: &[u64], i: usize, left: u64, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        let max = left / w;
        for k in (0..=max).rev() {
            cur[i] = k as u32;
            rec(weights, i + 1, left - k * w, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; weights.len()];
    rec(weights, 0, n, &mut cur, &mut out);
    out
}

struct Degree {
    monos: Vec<Exponent>,
    kernel: Vec<SparseVec>,
}

/// Minimal relations through the search bound.
pub fn find_relations(model: &GradedRingModel, src: &dyn SectionSource, opts: &RingOptions) -> Result<Presentation, RingError> {
    let vars = model.vars();
    let weights: Vec<u64> = model.generators.iter().map(|g| g.degree).collect();
    let top = weights.iter().copied().max().unwrap_or(1);
    let mut pieces = Pieces::new(src);
    let mut evals: HashMap<Exponent, BinaryForm> = HashMap::new();
    evals.insert(vec![0; weights.len()], BinaryForm::one());
    let mut degrees: Vec<Degree> = Vec::new();
    let mut relations: Vec<MultiPoly> = Vec::new();
    let mut relation_degrees: Vec<u64> = Vec::new();
    let mut last_new = 0u64;
    let mut searched_to = 0;

    degrees.push(Degree { monos: vec![vec![0; weights.len()]], kernel: Vec::new() });
    for n in 1..=opts.max_degree {
        searched_to = n;
        let mut monos = monomials(&weights, n);
        if opts.reverse {
            monos.reverse();
        }
        let index: HashMap<Exponent, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ev = SparseEchelon::new();
        let mut kernel = Vec::new();
        for (j, m) in monos.iter().enumerate() {
            let i = m.iter().position(|e| *e > 0).unwrap();
            let mut rest = m.clone();
            rest[i] -= 1;
            let f = &model.generators[i].form * &evals[&rest];
            let v = SparseVec::from_dense(f.coeffs());
            evals.insert(m.clone(), f);
            if let Some(k) = ev.insert_tracked(v, SparseVec::unit(j)) {
                kernel.push(k);
            }
        }
        let expected = pieces.get(n)?.len();
        if ev.rank() != expected {
            return Err(RingError::NotGenerated { n, rank: ev.rank(), expected });
        }
        // relations generated in lower degrees
        let mut lower = SparseEchelon::new();
        'outer: for (i, &w) in weights.iter().enumerate() {
            if w > n {
                continue;
            }
            let below = &degrees[(n - w) as usize];
            for k in &below.kernel {
                if lower.rank() == kernel.len() {
                    break 'outer;
                }
                let shifted = SparseVec::from_entries(k.entries().iter().map(|(j, c)| {
                    let mut m = below.monos[*j].clone();
                    m[i] += 1;
                    (index[&m], c.clone())
                }));
                lower.insert(shifted);
            }
        }
        if lower.rank() < kernel.len() {
            for k in &kernel {
                if lower.insert(k.clone()) {
                    relations.push(to_poly(&vars, &monos, k));
                    relation_degrees.push(n);
                    last_new = n;
                }
            }
        }
        degrees.push(Degree { monos, kernel });
        // free memory of evaluations that can no longer be reached
        if n > top {
            let drop_deg = n - top;
            evals.retain(|m, _| m.iter().zip(&weights).map(|(e, w)| *e as u64 * w).sum::<u64>() > drop_deg);
        }
        if opts.patience > 0 && n >= 2 * top && n >= last_new + opts.patience {
            break;
        }
    }
    let (hilbert_numerator, palindromic) = hilbert_numerator(src, &weights, &mut pieces)?;
    Ok(Presentation { vars, relations, relation_degrees, hilbert_numerator, palindromic, searched_to })
}

fn to_poly(vars: &Vars, monos: &[Exponent], k: &SparseVec) -> MultiPoly {
    let vals: Vec<Rational> = k.entries().iter().map(|(_, c)| c.clone()).collect();
    let (ints, _) = primitive_integer_vector(&vals);
    MultiPoly::from_terms(vars, k.entries().iter().zip(ints).map(|((j, _), c)| (monos[*j].clone(), Rational::from_integer(c))))
}

/// H(t)·∏(1 − t^{d_i}) with the tail of H from Riemann–Roch.
fn hilbert_numerator(src: &dyn SectionSource, weights: &[u64], pieces: &mut Pieces) -> Result<(Vec<i64>, bool), RingError> {
    let total: u64 = weights.iter().sum();
    // the numerator has degree Σd + a with a small; leave generous room
    let len = (total + 4 * weights.iter().max().copied().unwrap_or(1) + 16) as usize;
    let mut h: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len as u64 {
        let d = match src.rr_dim(n) {
            Some(d) if n > 0 => d,
            _ => pieces.get(n)?.len(),
        };
        h.push(BigInt::from(d));
    }
    for &w in weights {
        for i in (w as usize..len).rev() {
            let prev = h[i - w as usize].clone();
            h[i] -= prev;
        }
    }
    // the tail must vanish once the series is polynomial
    let last = h.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    if last + 1 + weights.iter().max().copied().unwrap_or(1) as usize > len {
        return Ok((Vec::new(), false));
    }
    let num: Vec<i64> = h[..=last].iter().map(|c| c.to_i64().unwrap_or(i64::MAX)).collect();
    let rev: Vec<i64> = num.iter().rev().copied().collect();
    let neg: Vec<i64> = rev.iter().map(|c| -c).collect();
    let palindromic = rev == num || neg == num;
    Ok((num, palindromic))
}

/// Outcome of substituting generator realizations into equations.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checked: usize,
    /// (equation index, nonzero residual)
    pub failures: Vec<(usize, BinaryForm)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_presentation(bindings: &HashMap<String, BinaryForm>, equations: &[MultiPoly]) -> Result<VerifyReport, RingError> {
    let mut failures = Vec::new();
    for (i, eq) in equations.iter().enumerate() {
        let r = eq.subst_forms(bindings)?;
        if !r.is_zero() {
            failures.push((i, r));
        }
    }
    Ok(VerifyReport { checked: equations.len(), failures })
}

/// One term of a base equation: a coefficient times matrix entries picked
/// by column from the top row.
#[derive(Debug, Clone, PartialEq)]
pub struct RollingTerm {
    pub coeff: MultiPoly,
    pub slots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RollingFactorsData {
    pub matrix: [[MultiPoly; 4]; 2],
    pub base: Vec<RollingTerm>,
    pub steps: usize,
    /// Entry receiving the perturbation φ.
    pub phi_entry: (usize, usize),
}

impl RollingFactorsData {
    pub fn vars(&self) -> &Vars {
        self.matrix[0][0].vars()
    }

    pub fn base_equation(&self) -> MultiPoly {
        self.rolled(&self.matrix, 0).expect("step zero needs no rolling")
    }

    fn rolled(&self, m: &[[MultiPoly; 4]; 2], step: usize) -> Result<MultiPoly, RingError> {
        let mut acc = MultiPoly::zero(self.vars());
        for (ti, term) in self.base.iter().enumerate() {
            let mut slots: Vec<(usize, usize)> = term.slots.iter().map(|&c| (0, c)).collect();
            for k in 0..step {
                if let Some(s) = slots.iter_mut().find(|s| s.0 == 0) {
                    s.0 = 1;
                    continue;
                }
                // a bottom entry that reappears in the top row rolls on from there
                let pos = slots.iter().position(|&(_, c)| (0..4).any(|c2| c2 != c && m[0][c2] == m[1][c]));
                match pos {
                    Some(p) => {
                        let c = slots[p].1;
                        let c2 = (0..4).find(|&c2| c2 != c && m[0][c2] == m[1][c]).unwrap();
                        slots[p] = (1, c2);
                    }
                    None => {
                        let entry = slots.last().map(|&(r, c)| m[r][c].to_string()).unwrap_or_default();
                        return Err(RingError::RollingStep { step: k + 1, term: ti, entry });
                    }
                }
            }
            let mut t = term.coeff.clone();
            for (r, c) in slots {
                t = &t * &m[r][c];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }
}

/// The six 2×2 minors of the φ-perturbed matrix followed by the base
/// equation and its rolled successors.
pub fn rolling_factors(data: &RollingFactorsData, phi: &MultiPoly) -> Result<Vec<MultiPoly>, RingError> {
    let mut m = data.matrix.clone();
    let (r, c) = data.phi_entry;
    if phi.vars() != data.vars() {
        return Err(AlgebraError::VariableMismatch("phi".into()).into());
    }
    m[r][c] = &m[r][c] + phi;
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            out.push(&(&m[0][i] * &m[1][j]) - &(&m[0][j] * &m[1][i]));
        }
    }
    // the perturbed entry may appear elsewhere only through rolling
    for step in 0..=data.steps {
        out.push(data.rolled(&m, step)?);
    }
    Ok(out)
}

/// p and q agree up to a nonzero rational factor.
pub fn proportional(p: &MultiPoly, q: &MultiPoly) -> bool {
    if p.is_zero() || q.is_zero() {
        return p.is_zero() && q.is_zero();
    }
    let (ep, cp) = p.terms().iter().next().unwrap();
    let Some(cq) = q.terms().get(ep) else { return false };
    let r = cp / cq;
    p == &q.scale(&r)
}

/// Exact scalar relating two forms (f = λ·g), if any.
pub fn form_ratio(f: &BinaryForm, g: &BinaryForm) -> Option<Rational> {
    if f.degree() != g.degree() || g.is_zero() {
        return None;
    }
    let i = g.coeffs().iter().position(|c| !c.is_zero())?;
    let lambda = f.coeff(i) / g.coeff(i);
    (f == &g.scale(&lambda)).then_some(lambda)
}

/// Sign-normalize: first term (in sorted order) positive.
pub fn normalize_sign(p: &MultiPoly) -> MultiPoly {
    match p.sorted_terms().first() {
        Some((_, c)) if c.is_negative() => p.scale(&-Rational::one()),
        _ => p.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mpoly::vars;
    use crate::algebra::parse::parse_in;
    use crate::curve::ParamCurve;
    use crate::sections::{CurveContext, RootBundleData, SectionEngine};

    fn f(t: &str) -> BinaryForm {
        BinaryForm::parse(t).unwrap()
    }

    fn e6() -> CurveContext {
        let c = ParamCurve::new("e6", vec![f("s*t^3"), f("t^4"), f("(s^2 - t^2)^2")]).unwrap();
        CurveContext::new(c).unwrap()
    }

    #[test]
    fn e6_bitangent_ring() {
        let ctx = e6();
        let eng = SectionEngine::new(&ctx, RootBundleData::new(4, 3, 4, f("s*(2*s^2 - 3*t^2)"))).unwrap();
        let model = find_generators(&eng, 10, false).unwrap();
        assert_eq!(model.degrees(), vec![2, 3, 4, 4, 5, 5]);
        let pres = find_relations(&model, &eng, &RingOptions::up_to(14)).unwrap();
        assert_eq!(pres.relation_degrees, vec![8, 8, 8, 9, 9, 9, 10, 10, 10]);
        assert!(pres.palindromic);
        let rev = find_generators(&eng, 10, true).unwrap();
        assert_eq!(rev.degrees(), model.degrees());
        let names = [("zeta", 2, "s^2 - t^2"), ("u", 3, "s*(2*s^2 - 3*t^2)"), ("x", 4, "s*t^3"), ("y", 4, "t^4"),
            ("v", 5, "-(2*s^2 - t^2)*t^3"), ("w", 5, "s*(2*s^2 - t^2)*(s^2 - 2*t^2)")];
        let listed = GradedRingModel::new(names.iter().map(|(n, d, t)| Generator { name: n.to_string(), degree: *d, form: f(t) }).collect()).unwrap();
        check_generators(&listed, &eng, 10).unwrap();

        let v = listed.vars();
        let p = |t: &str| parse_in(t, &v).unwrap();
        let data = RollingFactorsData {
            matrix: [
                [p("u"), p("y - zeta^2"), p("x"), p("w")],
                [p("y - 4 zeta^2"), p("w"), p("v"), p("u^2 - 8 zeta^3 + 6 y zeta")],
            ],
            base: vec![
                RollingTerm { coeff: p("zeta"), slots: vec![0, 0] },
                RollingTerm { coeff: p("-1"), slots: vec![2, 2] },
                RollingTerm { coeff: p("y + 4 zeta^2"), slots: vec![1] },
            ],
            steps: 2,
            phi_entry: (1, 3),
        };
        let eqs = rolling_factors(&data, &MultiPoly::zero(&v)).unwrap();
        assert_eq!(eqs.len(), 9);
        assert!(verify_presentation(&listed.bindings(), &eqs).unwrap().passed());
        assert!(proportional(&eqs[8], &p("(y-4zeta^2)^2 zeta - v^2 + (u^2-8zeta^3+6y zeta)(y+4zeta^2)")));
        assert!(proportional(&eqs[7], &p("(y-4zeta^2)u zeta - v x + w(y+4zeta^2)")));
        let mut bad = eqs.clone();
        bad[0] = &bad[0] + &(&p("u") * &p("w")).scale(&Rational::from_integer(2.into()));
        let rep = verify_presentation(&listed.bindings(), &bad).unwrap();
        assert_eq!(rep.failures.len(), 1);
    }

    #[test]
    fn monomial_enumeration() {
        let m = monomials(&[2, 3], 6);
        assert_eq!(m, vec![vec![3, 0], vec![0, 2]]);
        let _ = vars(&[("a", 1)]);
    }
}
