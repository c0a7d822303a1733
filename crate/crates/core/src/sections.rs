//! Section spaces H⁰(C, nL) of root line bundles and of ℚ-divisors on a
//! parametrized rational cuspidal curve.
//!
//! Sections of nL are binary forms of degree n·D/ρ. The ladder route writes
//! nL = mH − qA and divides coordinate-span elements by g_A^q. The local
//! route imposes, at each cusp, that F·u^{−n/ρ} lies in the local ring, where
//! u is the local expansion of a coordinate not vanishing there.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::linalg::{span_basis, span_contains, span_intersection};
use crate::algebra::rational::serde_rational;
use crate::algebra::mpoly::Vars;
use crate::algebra::{series, AlgebraError, BinaryForm, MatrixQ, MultiPoly, Rational, Var};
use crate::curve::{CoordSpan, CurveError, CuspData, ParamCurve};
use crate::ideal::{rational_points, Budget};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SectionError {
    #[error("key form has degree {found}, but rho·deg must equal aUnits·D = {expected_total}")]
    KeyDegree { found: usize, expected_total: usize },
    #[error("key form vanishes at the cusp parameter {0}")]
    KeyAtCusp(String),
    #[error("key form to the power rho is not in the span V_{0}")]
    KeyNotInSpan(u32),
    #[error("root data has not been verified")]
    NotVerified,
    #[error("degree {n} has no representation rho·m − a·q (gcd {gcd} does not divide it)")]
    NoRepresentation { n: u64, gcd: u64 },
    #[error("invalid representation n = {rho}·{m} − {a}·{q} for n = {n}")]
    BadRepresentation { n: u64, rho: u32, m: u64, a: u32, q: u64 },
    #[error("degree {n}·D/rho is not an integer")]
    FractionalDegree { n: u64 },
    #[error("duality residual {residual} at n = {n}")]
    DualityResidual { n: u64, residual: i64 },
    #[error("support {0} passes through a cusp with a coefficient that is not a non-negative integer")]
    SupportAtCusp(String),
    #[error("supports {0} and {1} are not coprime")]
    SupportsNotCoprime(String, String),
    #[error("ideal computation failed: {0}")]
    Ideal(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// On-disk root bundle description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RootFile {
    pub id: String,
    pub curve: String,
    pub rho: u32,
    pub a_units: u32,
    pub kappa: i64,
    pub key_form: BinaryForm,
    #[serde(default)]
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootBundleData {
    pub rho: u32,
    pub a_units: u32,
    /// κ with κL = K_C.
    pub kappa: i64,
    pub key_form: BinaryForm,
    pub verified: bool,
}

impl RootBundleData {
    pub fn new(rho: u32, a_units: u32, kappa: i64, key_form: BinaryForm) -> Self {
        RootBundleData { rho, a_units, kappa, key_form, verified: false }
    }

    pub fn from_file(f: &RootFile) -> Self {
        Self::new(f.rho, f.a_units, f.kappa, f.key_form.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionSpace {
    pub n: u64,
    /// Binary degree of the forms in the basis.
    pub degree: usize,
    pub basis: Vec<BinaryForm>,
    /// The pair (m, q) with n = ρm − aq, for ladder-computed spaces.
    pub representation: Option<(u64, u64)>,
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Anything that yields graded pieces of a section ring as binary forms.
pub trait SectionSource: Sync {
    /// Binary degree of the forms representing degree-n sections.
    fn form_degree(&self, n: u64) -> usize;
    fn sections(&self, n: u64) -> Result<Vec<BinaryForm>, SectionError>;
    /// h⁰ in degree n when Riemann–Roch decides it without computation.
    fn rr_dim(&self, _n: u64) -> Option<usize> {
        None
    }
}

fn nonspecial(degree: i64, genus: i64) -> Option<usize> {
    if degree > 2 * genus - 2 {
        Some((degree - genus + 1) as usize)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HilbertRow {
    pub n: u64,
    pub dim: usize,
    /// h⁰(nL) − h⁰((κ−n)L) − (n·ℓ − g + 1)
    pub residual: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HilbertTable {
    pub rows: Vec<HilbertRow>,
}

impl HilbertTable {
    pub fn dims(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.dim).collect()
    }

    /// Σ_{n=0}^{upto} h⁰(nL)
    pub fn pg_sum(&self, upto: u64) -> usize {
        self.rows.iter().filter(|r| r.n <= upto).map(|r| r.dim).sum()
    }
}

/// Cusp analysis plus lazily grown coordinate spans for one curve.
pub struct CurveContext {
    pub curve: ParamCurve,
    pub cusps: Vec<CuspData>,
    pub genus: u64,
    spans: Mutex<Vec<CoordSpan>>,
}

impl CurveContext {
    pub fn new(curve: ParamCurve) -> Result<Self, SectionError> {
        let cusps = curve.cusp_analysis()?;
        let genus = curve.genus_from_cusps(&cusps)?;
        Ok(CurveContext { curve, cusps, genus, spans: Mutex::new(Vec::new()) })
    }

    pub fn span(&self, m: usize) -> CoordSpan {
        let mut spans = self.spans.lock().expect("span cache poisoned");
        if spans.len() <= m {
            *spans = self.curve.coordinate_spans(m);
        }
        spans[m].clone()
    }

    /// Local-ring residual of F·u^{−α} at every cusp, where u is the
    /// expansion of the cusp's unit coordinate. Concatenated over cusps.
    fn local_conditions(&self, degree: usize, alpha: &Rational) -> MatrixQ {
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for cusp in &self.cusps {
            let c = cusp.conductor as usize;
            if c == 0 {
                continue;
            }
            let u = cusp.expand(&self.curve.coords()[cusp.unit_coord], c);
            let w = series::normalized_unit_pow(&u, &-alpha.clone(), c);
            let mut cols: Vec<Vec<Rational>> = Vec::new();
            for i in 0..=degree {
                let mono = BinaryForm::monomial(degree, i, Rational::one());
                let f = cusp.expand(&mono, c);
                cols.push(cusp.residual(&series::mul(&f, &w, c)));
            }
            for r in 0..cusp.gaps().len() {
                rows.push(cols.iter().map(|col| col[r].clone()).collect());
            }
        }
        if rows.is_empty() {
            return MatrixQ::zeros(0, degree + 1);
        }
        MatrixQ::from_rows(rows).expect("rectangular")
    }
}

/// Sections of multiples of a verified root bundle.
pub struct SectionEngine<'a> {
    pub ctx: &'a CurveContext,
    pub root: RootBundleData,
}

impl<'a> SectionEngine<'a> {
    /// Check degrees, cusp avoidance and g^ρ ∈ V_a, then build the engine.
    pub fn new(ctx: &'a CurveContext, root: RootBundleData) -> Result<Self, SectionError> {
        let root = verify_root_data(ctx, root)?;
        Ok(SectionEngine { ctx, root })
    }

    /// ℓ·n = n·D/ρ, the binary degree of degree-n sections.
    pub fn section_degree(&self, n: u64) -> Result<usize, SectionError> {
        let num = n * self.ctx.curve.degree() as u64;
        if num % self.root.rho as u64 != 0 {
            return Err(SectionError::FractionalDegree { n });
        }
        Ok((num / self.root.rho as u64) as usize)
    }

    /// Minimal m ≥ 0 with q = (ρm − n)/a a non-negative integer.
    pub fn representation(&self, n: u64) -> Result<(u64, u64), SectionError> {
        let (rho, a) = (self.root.rho as u64, self.root.a_units as u64);
        let g = rho.gcd(&a);
        if n % g != 0 {
            return Err(SectionError::NoRepresentation { n, gcd: g });
        }
        let mut m = n.div_ceil(rho);
        loop {
            let num = rho * m - n;
            if num % a == 0 {
                return Ok((m, num / a));
            }
            m += 1;
        }
    }

    pub fn section_space(&self, n: u64) -> Result<SectionSpace, SectionError> {
        let (m, q) = self.representation(n)?;
        self.section_space_with(n, m, q)
    }

    /// Ladder computation with an explicit representation n = ρm − aq.
    pub fn section_space_with(&self, n: u64, m: u64, q: u64) -> Result<SectionSpace, SectionError> {
        let (rho, a) = (self.root.rho, self.root.a_units);
        if rho as u64 * m != n + a as u64 * q {
            return Err(SectionError::BadRepresentation { n, rho, m, a, q });
        }
        let degree = self.section_degree(n)?;
        if n == 0 {
            return Ok(SectionSpace { n, degree: 0, basis: vec![BinaryForm::one()], representation: Some((m, q)) });
        }
        let span = self.ctx.span(m as usize);
        let big = m as usize * self.ctx.curve.degree();
        let g = self.root.key_form.pow(q as u32);
        let multiples: Vec<BinaryForm> = (0..=degree)
            .map(|i| &g * &BinaryForm::monomial(degree, i, Rational::one()))
            .collect();
        let inter = span_intersection(&span.basis, &multiples, big)?;
        let quotients: Vec<BinaryForm> = inter.iter().map(|f| f.div_exact(&g)).collect::<Result<_, _>>()?;
        let basis = span_basis(&quotients, degree)?;
        Ok(SectionSpace { n, degree, basis, representation: Some((m, q)) })
    }

    pub fn hilbert_table(&self, nmax: u64) -> Result<HilbertTable, SectionError> {
        hilbert_table_with(self.ctx, &self.root, nmax, |n| Ok(self.section_space(n)?.dim()))
    }
}

/// Local-route section spaces of nL for ρL ~ H, independent of any key form.
pub fn local_section_space(ctx: &CurveContext, rho: u32, n: u64) -> Result<SectionSpace, SectionError> {
    let num = n * ctx.curve.degree() as u64;
    if num % rho as u64 != 0 {
        return Err(SectionError::FractionalDegree { n });
    }
    let degree = (num / rho as u64) as usize;
    let alpha = Rational::new(BigInt::from(n), BigInt::from(rho));
    let conditions = ctx.local_conditions(degree, &alpha);
    let basis = kernel_forms(&conditions, degree);
    Ok(SectionSpace { n, degree, basis, representation: None })
}

fn kernel_forms(conditions: &MatrixQ, degree: usize) -> Vec<BinaryForm> {
    if conditions.rows() == 0 {
        return (0..=degree).map(|i| BinaryForm::monomial(degree, i, Rational::one())).collect();
    }
    conditions.kernel().into_iter().map(BinaryForm::new).collect()
}

/// Verify a root bundle: degree bookkeeping, cusp avoidance and g^ρ ∈ V_a.
pub fn verify_root_data(ctx: &CurveContext, mut root: RootBundleData) -> Result<RootBundleData, SectionError> {
    let expected_total = root.a_units as usize * ctx.curve.degree();
    if root.key_form.degree() * root.rho as usize != expected_total {
        return Err(SectionError::KeyDegree { found: root.key_form.degree(), expected_total });
    }
    for cusp in &ctx.cusps {
        if root.key_form.vanishes_at(&cusp.point) {
            return Err(SectionError::KeyAtCusp(cusp.point_form.to_string()));
        }
    }
    let power = root.key_form.pow(root.rho);
    let span = ctx.span(root.a_units as usize);
    if !span_contains(&span.basis, &power)? {
        return Err(SectionError::KeyNotInSpan(root.a_units));
    }
    root.verified = true;
    Ok(root)
}

/// Dimensions 0..=nmax with duality residuals against κ − n.
pub fn hilbert_table_with(
    ctx: &CurveContext,
    root: &RootBundleData,
    nmax: u64,
    dim: impl Fn(u64) -> Result<usize, SectionError>,
) -> Result<HilbertTable, SectionError> {
    let d = ctx.curve.degree() as i64;
    let rho = root.rho as i64;
    let g = ctx.genus as i64;
    let mut cache: std::collections::BTreeMap<i64, usize> = std::collections::BTreeMap::new();
    let mut h = |k: i64| -> Result<usize, SectionError> {
        if k < 0 {
            return Ok(0);
        }
        if let Some(v) = cache.get(&k) {
            return Ok(*v);
        }
        let v = dim(k as u64)?;
        cache.insert(k, v);
        Ok(v)
    };
    let mut rows = Vec::new();
    for n in 0..=nmax {
        let hn = h(n as i64)?;
        let dual = h(root.kappa - n as i64)?;
        let rr = n as i64 * d / rho - g + 1;
        let residual = hn as i64 - dual as i64 - rr;
        if residual != 0 {
            return Err(SectionError::DualityResidual { n, residual });
        }
        rows.push(HilbertRow { n, dim: hn, residual });
    }
    Ok(HilbertTable { rows })
}

impl SectionSource for SectionEngine<'_> {
    fn form_degree(&self, n: u64) -> usize {
        (n as usize * self.ctx.curve.degree()) / self.root.rho as usize
    }

    fn sections(&self, n: u64) -> Result<Vec<BinaryForm>, SectionError> {
        Ok(self.section_space(n)?.basis)
    }

    fn rr_dim(&self, n: u64) -> Option<usize> {
        nonspecial(self.form_degree(n) as i64, self.ctx.genus as i64)
    }
}

/// Sections computed by the local route only.
pub struct LocalRoot<'a> {
    pub ctx: &'a CurveContext,
    pub rho: u32,
}

impl SectionSource for LocalRoot<'_> {
    fn form_degree(&self, n: u64) -> usize {
        (n as usize * self.ctx.curve.degree()) / self.rho as usize
    }

    fn sections(&self, n: u64) -> Result<Vec<BinaryForm>, SectionError> {
        Ok(local_section_space(self.ctx, self.rho, n)?.basis)
    }

    fn rr_dim(&self, n: u64) -> Option<usize> {
        nonspecial(self.form_degree(n) as i64, self.ctx.genus as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QPart {
    pub support: BinaryForm,
    #[serde(with = "serde_rational")]
    pub coeff: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QDivisor {
    pub parts: Vec<QPart>,
}

impl QDivisor {
    /// Binary degree e of degree-one sections: Σ over positive parts of
    /// ⌈c⌉·deg φ. Degree-n sections are forms of degree n·e.
    pub fn unit_degree(&self) -> usize {
        self.parts
            .iter()
            .filter(|p| p.coeff.is_positive())
            .map(|p| p.coeff.ceil().to_integer().to_usize().unwrap() * p.support.degree())
            .sum()
    }

    pub fn degree(&self) -> Rational {
        self.parts
            .iter()
            .map(|p| &p.coeff * Rational::from_integer(BigInt::from(p.support.degree())))
            .sum()
    }
}

/// Sections of ⌊nD⌋ for a ℚ-divisor D, as forms N of degree n·e standing for
/// N / ∏_{c>0} φ^{n⌈c⌉}.
pub struct QDivisorSections<'a> {
    pub ctx: &'a CurveContext,
    pub qdiv: QDivisor,
}

impl<'a> QDivisorSections<'a> {
    pub fn new(ctx: &'a CurveContext, qdiv: QDivisor) -> Result<Self, SectionError> {
        for (i, p) in qdiv.parts.iter().enumerate() {
            for q in &qdiv.parts[i + 1..] {
                if BinaryForm::gcd(&p.support, &q.support).degree() > 0 {
                    return Err(SectionError::SupportsNotCoprime(p.support.to_string(), q.support.to_string()));
                }
            }
            let at_cusp = ctx.cusps.iter().any(|c| p.support.vanishes_at(&c.point));
            if at_cusp && !(p.coeff.is_integer() && !p.coeff.is_negative()) {
                return Err(SectionError::SupportAtCusp(p.support.to_string()));
            }
        }
        Ok(QDivisorSections { ctx, qdiv })
    }

    pub fn section_space(&self, n: u64) -> Result<SectionSpace, SectionError> {
        let degree = n as usize * self.qdiv.unit_degree();
        let nr = Rational::from_integer(BigInt::from(n));
        // required vanishing along each support
        let mut fixed = BinaryForm::one();
        let mut extra: Vec<(BinaryForm, Rational)> = Vec::new();
        let mut cusp_weight = Rational::zero();
        for p in &self.qdiv.parts {
            let nc = &nr * &p.coeff;
            let floor = nc.floor().to_integer();
            let need = if p.coeff.is_positive() {
                &nr * p.coeff.ceil() - Rational::from_integer(floor)
            } else {
                -Rational::from_integer(floor)
            };
            let need = need.to_integer().to_u32().unwrap();
            if need > 0 {
                fixed = &fixed * &p.support.pow(need);
            }
            if p.coeff.is_positive() {
                let power = &nr * p.coeff.ceil();
                let at_cusp = self.ctx.cusps.iter().any(|c| p.support.vanishes_at(&c.point));
                if at_cusp {
                    cusp_weight += power * Rational::from_integer(BigInt::from(p.support.degree()));
                } else {
                    extra.push((p.support.clone(), -power));
                }
            }
        }
        if fixed.degree() > degree {
            return Ok(SectionSpace { n, degree, basis: Vec::new(), representation: None });
        }
        let free = degree - fixed.degree();
        let alpha = cusp_weight / Rational::from_integer(BigInt::from(self.ctx.curve.degree()));
        // conditions on M with N = fixed·M
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for cusp in &self.ctx.cusps {
            let c = cusp.conductor as usize;
            if c == 0 {
                continue;
            }
            let u = cusp.expand(&self.ctx.curve.coords()[cusp.unit_coord], c);
            let mut w = series::normalized_unit_pow(&u, &-alpha.clone(), c);
            for (f, e) in &extra {
                let fe = cusp.expand(f, c);
                w = series::mul(&w, &series::normalized_unit_pow(&fe, e, c), c);
            }
            let fx = cusp.expand(&fixed, c);
            let w = series::mul(&w, &fx, c);
            let cols: Vec<Vec<Rational>> = (0..=free)
                .map(|i| {
                    let mono = cusp.expand(&BinaryForm::monomial(free, i, Rational::one()), c);
                    cusp.residual(&series::mul(&mono, &w, c))
                })
                .collect();
            for r in 0..cusp.gaps().len() {
                rows.push(cols.iter().map(|col| col[r].clone()).collect());
            }
        }
        let conditions = if rows.is_empty() {
            MatrixQ::zeros(0, free + 1)
        } else {
            MatrixQ::from_rows(rows)?
        };
        let multipliers = kernel_forms(&conditions, free);
        let forms: Vec<BinaryForm> = multipliers.iter().map(|m| &fixed * m).collect();
        let basis = span_basis(&forms, degree)?;
        Ok(SectionSpace { n, degree, basis, representation: None })
    }
}

impl SectionSource for QDivisorSections<'_> {
    fn form_degree(&self, n: u64) -> usize {
        n as usize * self.qdiv.unit_degree()
    }

    fn sections(&self, n: u64) -> Result<Vec<BinaryForm>, SectionError> {
        Ok(self.section_space(n)?.basis)
    }
}

/// Result of a perfect-power search in a linear family of forms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerSearch {
    /// (member, root) with root^k = member; roots have leading coefficient 1.
    pub members: Vec<(BinaryForm, BinaryForm)>,
    /// Conditions on the root coefficients b0.. (first nonzero fixed to 1)
    /// cutting out positive-dimensional families; members above include
    /// samples from them.
    pub families: Vec<Vec<MultiPoly>>,
    /// Solutions exist only over an extension of ℚ for some chart.
    pub irrational: bool,
}

/// All k-th powers in the span of the given forms, up to scalars.
pub fn power_search(space: &[BinaryForm], k: u32, budget: &Budget) -> Result<PowerSearch, SectionError> {
    let mut out = PowerSearch::default();
    let Some(first) = space.first() else { return Ok(out) };
    let big = first.degree();
    if k == 0 || big % k as usize != 0 {
        return Ok(out);
    }
    let e = big / k as usize;
    let basis = span_basis(space, big)?;
    if basis.is_empty() {
        return Ok(out);
    }
    let rows: Vec<Vec<Rational>> = basis.iter().map(|f| f.coeffs().to_vec()).collect();
    let annihilators = MatrixQ::from_rows(rows)?.kernel();

    for chart in 0..=e {
        let names: Vec<String> = (chart + 1..=e).map(|i| format!("b{i}")).collect();
        let vars: Vars = names.iter().map(|n| Var { name: n.clone(), weight: 1 }).collect::<Vec<_>>().into();
        // root coefficients as polynomials in the free unknowns
        let coeff = |i: usize| -> MultiPoly {
            if i < chart {
                MultiPoly::zero(&vars)
            } else if i == chart {
                MultiPoly::one(&vars)
            } else {
                MultiPoly::var_at(&vars, i - chart - 1)
            }
        };
        let root: Vec<MultiPoly> = (0..=e).map(coeff).collect();
        let mut power = vec![MultiPoly::one(&vars)];
        for _ in 0..k {
            let mut next = vec![MultiPoly::zero(&vars); power.len() + e];
            for (a, pa) in power.iter().enumerate() {
                for (b, rb) in root.iter().enumerate() {
                    if !pa.is_zero() && !rb.is_zero() {
                        next[a + b] = &next[a + b] + &(pa * rb);
                    }
                }
            }
            power = next;
        }
        let eqs: Vec<MultiPoly> = annihilators
            .iter()
            .map(|y| {
                let mut acc = MultiPoly::zero(&vars);
                for (c, p) in y.iter().zip(&power) {
                    if !c.is_zero() {
                        acc = &acc + &p.scale(c);
                    }
                }
                acc
            })
            .collect();
        let sols = rational_points(&vars, &eqs, budget).map_err(|err| SectionError::Ideal(err.to_string()))?;
        out.irrational |= sols.irrational;
        out.families.extend(sols.families);
        for pt in sols.points {
            let mut c = vec![Rational::zero(); e + 1];
            c[chart] = Rational::one();
            for (j, v) in pt.into_iter().enumerate() {
                c[chart + 1 + j] = v;
            }
            let g = BinaryForm::new(c);
            let member = g.pow(k);
            debug_assert!(span_contains(&basis, &member).unwrap_or(false));
            if span_contains(&basis, &member)? && !out.members.iter().any(|(_, r)| r == &g) {
                out.members.push((member, g));
            }
        }
    }
    Ok(out)
}

/// Roots from a power search that avoid every cusp parameter, i.e. those
/// usable as key forms.
pub fn cusp_free_roots(ctx: &CurveContext, found: &PowerSearch) -> Vec<BinaryForm> {
    found
        .members
        .iter()
        .map(|(_, r)| r.clone())
        .filter(|r| ctx.cusps.iter().all(|c| !r.vanishes_at(&c.point)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    fn ctx(coords: &[&str]) -> CurveContext {
        let curve = ParamCurve::new("t", coords.iter().map(|c| BinaryForm::parse(c).unwrap()).collect()).unwrap();
        CurveContext::new(curve).unwrap()
    }

    fn f(text: &str) -> BinaryForm {
        BinaryForm::parse(text).unwrap()
    }

    #[test]
    fn e6_bitangent_table() {
        let c = ctx(&["s*t^3", "t^4", "(s^2 - t^2)^2"]);
        let eng = SectionEngine::new(&c, RootBundleData::new(4, 3, 4, f("s*(2*s^2 - 3*t^2)"))).unwrap();
        let table = eng.hilbert_table(5).unwrap();
        assert_eq!(table.dims(), vec![1, 0, 1, 1, 3, 3]);
        assert_eq!(table.pg_sum(4), 6);
        assert_eq!(eng.section_space(2).unwrap().basis, vec![f("s^2 - t^2")]);
        for n in 0..8 {
            let ladder = eng.section_space(n).unwrap().basis;
            let local = local_section_space(&c, 4, n).unwrap().basis;
            assert_eq!(ladder, local, "n = {n}");
        }
    }

    #[test]
    fn key_through_cusp_rejected() {
        let c = ctx(&["s*t^3", "t^4", "(s^2 - t^2)^2"]);
        let err = SectionEngine::new(&c, RootBundleData::new(4, 3, 4, f("t*(2*s^2 - 3*t^2)"))).err().unwrap();
        assert!(matches!(err, SectionError::KeyAtCusp(_)));
    }

    #[test]
    fn cuspidal_cubic_qdivisor() {
        let c = ctx(&["s*t^2", "t^3", "s^3"]);
        let third = ratio(-1, 3);
        let q = QDivisor {
            parts: vec![
                QPart { support: f("s"), coeff: Rational::one() },
                QPart { support: f("s - t"), coeff: third.clone() },
                QPart { support: f("s + t"), coeff: third },
            ],
        };
        let qs = QDivisorSections::new(&c, q).unwrap();
        let dims: Vec<usize> = (0..12).map(|n| qs.section_space(n).unwrap().dim()).collect();
        // genus one: h⁰ = deg⌊nD⌋ once positive, and 2P − Q1 − Q2 is trivial
        let rr: Vec<usize> = (0..12i64)
            .map(|n| {
                let d = n - 2 * ((n + 2) / 3);
                if d > 0 { d as usize } else if n % 2 == 0 { 1 } else { 0 }
            })
            .collect();
        assert_eq!(dims, rr);
        assert_eq!(&dims[..7], &[1, 0, 1, 1, 1, 1, 2]);
    }

    #[test]
    fn power_search_examples() {
        let b = Budget::default();
        let quartics = [f("s^4"), f("s^2*t^2"), f("t^4")];
        let res = power_search(&quartics, 2, &b).unwrap();
        let roots: Vec<BinaryForm> = res.members.iter().map(|(_, r)| r.clone()).collect();
        for r in ["s^2 + t^2", "s^2", "t^2", "s^2 - t^2", "s*t"] {
            assert!(roots.contains(&f(r)), "{r}");
        }
        assert!(!res.families.is_empty());
        assert!(power_search(&[f("s^4 + t^4")], 2, &b).unwrap().members.is_empty());
    }

    #[test]
    fn a6_theta_square() {
        let c = ctx(&["s^2*t^2", "t^4", "s^4 + s*t^3"]);
        // 3Θ = 6L with 4L = K = H
        let space = local_section_space(&c, 4, 6).unwrap();
        assert_eq!(space.dim(), 4);
        let res = power_search(&space.basis, 2, &Budget::default()).unwrap();
        // s·t² and t³ also square into the space but meet the cusp
        assert_eq!(res.members.len(), 3);
        let keys = cusp_free_roots(&c, &res);
        assert_eq!(keys, vec![f("s^3 + 3/4*t^3")]);
        assert!(res.families.is_empty());
    }
}
