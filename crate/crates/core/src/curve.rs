//! Parametrized rational cuspidal curves: coordinate spans, cusp detection,
//! value semigroups and arithmetic genus.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::bform::{normalize_point, ParamPoint};
use crate::algebra::linalg::{rref_rows, SparseEchelon, SparseVec};
use crate::algebra::rational::ratio;
use crate::algebra::{series, AlgebraError, BinaryForm, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("a curve needs at least 3 coordinates, found {0}")]
    TooFewCoordinates(usize),
    #[error("coordinate {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: usize, found: usize },
    #[error("coordinates share the base-point factor {0}")]
    BasePoints(String),
    #[error("coordinates are linearly dependent (span has dimension {0})")]
    Degenerate(usize),
    #[error("the parametrization is not birational onto its image")]
    NotBirational,
    #[error("cusp parameters are not all rational: unresolved factor {0}")]
    IrrationalCusp(String),
    #[error("multibranch singularity detected: Hilbert function gives arithmetic genus {hilbert}, cusps account for {cusps}")]
    Multibranch { hilbert: i64, cusps: u64 },
    #[error("plane curve of degree {degree} must have genus {expected}, cusps give {found}")]
    PlaneGenusMismatch { degree: usize, expected: u64, found: u64 },
    #[error("conductor search did not stabilize below truncation {0}")]
    ConductorSearch(usize),
    #[error("linear forms must be pairwise non-proportional")]
    RepeatedForms,
    #[error("the reciprocal construction needs at least 3 linear forms")]
    TooFewForms,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// On-disk curve description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveFile {
    pub name: String,
    pub coords: Vec<BinaryForm>,
    #[serde(default)]
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamCurve {
    name: String,
    coords: Vec<BinaryForm>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordSpan {
    pub m: usize,
    pub basis: Vec<BinaryForm>,
}

impl CoordSpan {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Local data of one cusp.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspData {
    pub point: ParamPoint,
    pub point_form: BinaryForm,
    pub multiplicity: u64,
    pub semigroup: Vec<u64>,
    pub delta: u64,
    pub conductor: u64,
    /// Index of a coordinate not vanishing at the cusp.
    pub unit_coord: usize,
    /// Reduced echelon basis (lowest order first) of the local ring modulo
    /// τ^conductor, in the chart τ ↦ point + τ·direction.
    local_ring: Vec<Vec<Rational>>,
    local_pivots: Vec<usize>,
}

impl CuspData {
    /// Coordinates of a truncated series modulo the local ring, one per
    /// semigroup gap. Zero exactly when the series lies in the local ring.
    pub fn residual(&self, series: &[Rational]) -> Vec<Rational> {
        let c = self.conductor as usize;
        let mut v = series::truncate(series.to_vec(), c);
        for (row, &p) in self.local_ring.iter().zip(&self.local_pivots) {
            let f = v[p].clone();
            if !f.is_zero() {
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &f * r;
                }
            }
        }
        self.gaps().into_iter().map(|g| v[g as usize].clone()).collect()
    }

    pub fn gaps(&self) -> Vec<u64> {
        (0..self.conductor).filter(|&k| !self.contains(k)).collect()
    }

    /// Membership in the value semigroup.
    pub fn contains(&self, k: u64) -> bool {
        if k >= self.conductor {
            return true;
        }
        let mut reach = vec![false; k as usize + 1];
        reach[0] = true;
        for i in 1..=k as usize {
            reach[i] = self.semigroup.iter().any(|&g| g as usize <= i && reach[i - g as usize]);
        }
        reach[k as usize]
    }

    /// Expansion of a form in the local chart, truncated to `len` terms.
    pub fn expand(&self, f: &BinaryForm, len: usize) -> Vec<Rational> {
        series::truncate(f.local_expansion(&self.point), len)
    }
}

impl ParamCurve {
    pub fn new(name: impl Into<String>, coords: Vec<BinaryForm>) -> Result<Self, CurveError> {
        if coords.len() < 3 {
            return Err(CurveError::TooFewCoordinates(coords.len()));
        }
        let d = coords[0].degree();
        for (i, c) in coords.iter().enumerate() {
            if c.degree() != d {
                return Err(CurveError::DegreeMismatch { index: i, expected: d, found: c.degree() });
            }
        }
        let g = coords.iter().fold(BinaryForm::zero(d), |acc, c| BinaryForm::gcd(&acc, c));
        if g.degree() > 0 {
            return Err(CurveError::BasePoints(g.to_string()));
        }
        let curve = ParamCurve { name: name.into(), coords };
        let dim = curve.coordinate_span(1).dim();
        if dim < curve.coords.len() {
            return Err(CurveError::Degenerate(dim));
        }
        Ok(curve)
    }

    pub fn from_file(file: CurveFile) -> Result<Self, CurveError> {
        Self::new(file.name, file.coords)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coords(&self) -> &[BinaryForm] {
        &self.coords
    }

    /// Degree D of the coordinate forms, which is the degree of H.
    pub fn degree(&self) -> usize {
        self.coords[0].degree()
    }

    pub fn is_plane(&self) -> bool {
        self.coords.len() == 3
    }

    /// Spans V_1, …, V_mmax of degree-m monomials in the coordinates.
    pub fn coordinate_spans(&self, mmax: usize) -> Vec<CoordSpan> {
        let d = self.degree();
        let mut out = vec![CoordSpan { m: 0, basis: vec![BinaryForm::one()] }];
        for m in 1..=mmax {
            let mut ech = SparseEchelon::new();
            for b in &out[m - 1].basis {
                for c in &self.coords {
                    ech.insert(SparseVec::from_dense((c * b).coeffs()));
                }
            }
            let basis = ech
                .reduced_rows()
                .into_iter()
                .map(|r| BinaryForm::new(r.to_dense(m * d + 1)))
                .collect();
            out.push(CoordSpan { m, basis });
        }
        out
    }

    pub fn coordinate_span(&self, m: usize) -> CoordSpan {
        self.coordinate_spans(m).pop().unwrap()
    }

    /// Parameter values where the parametrization fails to be immersive.
    pub fn singular_parameters(&self) -> Result<Vec<ParamPoint>, CurveError> {
        let ds: Vec<BinaryForm> = self.coords.iter().map(|c| c.derivative_s()).collect();
        let dt: Vec<BinaryForm> = self.coords.iter().map(|c| c.derivative_t()).collect();
        let deg = 2 * self.degree() - 2;
        let mut g = BinaryForm::zero(deg);
        for i in 0..self.coords.len() {
            for j in i + 1..self.coords.len() {
                let minor = (&ds[i] * &dt[j]).checked_sub(&(&ds[j] * &dt[i]))?;
                g = BinaryForm::gcd(&g, &minor);
            }
        }
        if g.is_zero() || g.degree() == 0 {
            return Ok(Vec::new());
        }
        let radical = g.squarefree();
        let roots = radical.rational_roots();
        if roots.len() < radical.degree() {
            let mut rest = radical.clone();
            for r in &roots {
                rest = rest.div_exact(&BinaryForm::point_form(r))?;
            }
            return Err(CurveError::IrrationalCusp(rest.to_string()));
        }
        Ok(roots)
    }

    /// Semigroup, delta and local ring of every cusp.
    pub fn cusp_analysis(&self) -> Result<Vec<CuspData>, CurveError> {
        self.singular_parameters()?
            .into_iter()
            .map(|p| self.analyze_point(&p))
            .collect()
    }

    fn analyze_point(&self, p: &ParamPoint) -> Result<CuspData, CurveError> {
        let p = normalize_point(p);
        let expansions: Vec<Vec<Rational>> = self.coords.iter().map(|c| c.local_expansion(&p)).collect();
        let j = expansions.iter().position(|e| !e[0].is_zero()).expect("base-point free");
        let mut len = 32usize;
        loop {
            let inv = series::inverse(&expansions[j], len);
            let gens: Vec<Vec<Rational>> = expansions
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, e)| {
                    let mut h = series::mul(e, &inv, len);
                    h[0] = Rational::zero();
                    h
                })
                .collect();
            let ech = algebra_closure(&gens, len);
            let values: Vec<usize> = ech.pivots();
            if let Some(conductor) = conductor_from_values(&values, len) {
                return Ok(build_cusp(&p, j, &ech, &values, conductor));
            }
            len *= 2;
            if len > 1 << 13 {
                return Err(CurveError::ConductorSearch(len / 2));
            }
        }
    }

    /// Σ delta over cusps, cross-checked against the Hilbert function of the
    /// coordinate ring and, for plane curves, the degree–genus formula.
    pub fn arithmetic_genus(&self) -> Result<u64, CurveError> {
        let cusps = self.cusp_analysis()?;
        self.genus_from_cusps(&cusps)
    }

    pub fn genus_from_cusps(&self, cusps: &[CuspData]) -> Result<u64, CurveError> {
        let g: u64 = cusps.iter().map(|c| c.delta).sum();
        let d = self.degree();
        if self.is_plane() {
            let expected = ((d - 1) * (d - 2) / 2) as u64;
            if expected != g {
                return Err(CurveError::PlaneGenusMismatch { degree: d, expected, found: g });
            }
        }
        let m0 = self.hilbert_stable_degree(g);
        let dim = self.coordinate_span(m0).dim() as i64;
        let hilbert = (m0 * d) as i64 + 1 - dim;
        if hilbert != g as i64 {
            return Err(CurveError::Multibranch { hilbert, cusps: g });
        }
        Ok(g)
    }

    /// A degree from which dim V_m equals the Hilbert polynomial.
    pub fn hilbert_stable_degree(&self, genus: u64) -> usize {
        let d = self.degree();
        let castelnuovo = (d + 2).saturating_sub(self.coords.len());
        let nonspecial = (2 * genus as usize).div_ceil(d) + 1;
        castelnuovo.max(nonspecial).max(2)
    }

    /// Generic-fiber test at a few fixed parameter values.
    pub fn is_birational(&self) -> bool {
        let probes = [ratio(7, 3), ratio(-5, 2), ratio(11, 7)];
        probes.iter().any(|x| self.fiber_degree(&(x.clone(), Rational::one())) == 1)
    }

    /// Degree of gcd_{i<j} (f_i(p) f_j − f_j(p) f_i): the number of parameter
    /// values (with multiplicity) mapping to the image of p.
    pub fn fiber_degree(&self, p: &ParamPoint) -> usize {
        let vals: Vec<Rational> = self.coords.iter().map(|c| c.eval(&p.0, &p.1)).collect();
        let mut g = BinaryForm::zero(self.degree());
        for i in 0..self.coords.len() {
            for j in i + 1..self.coords.len() {
                let h = self.coords[j].scale(&vals[i]).checked_sub(&self.coords[i].scale(&vals[j])).unwrap();
                g = BinaryForm::gcd(&g, &h);
            }
        }
        g.degree()
    }

    /// Reparametrize by (s,t) ↦ (a·s + b·t, c·s + d·t).
    pub fn reparametrize(&self, a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Result<Self, CurveError> {
        Self::new(
            self.name.clone(),
            self.coords.iter().map(|f| f.compose_linear(a, b, c, d)).collect(),
        )
    }

    /// The curve with coordinates ∏_{j≠i} φⱼ² for distinct linear forms φ.
    pub fn reciprocal_cusp_curve(name: impl Into<String>, forms: &[BinaryForm]) -> Result<Self, CurveError> {
        if forms.len() < 3 {
            return Err(CurveError::TooFewForms);
        }
        for f in forms {
            if f.degree() != 1 || f.is_zero() {
                return Err(CurveError::Algebra(AlgebraError::DegreeMismatch { expected: 1, found: f.degree() }));
            }
        }
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                if BinaryForm::gcd(&forms[i], &forms[j]).degree() > 0 {
                    return Err(CurveError::RepeatedForms);
                }
            }
        }
        let squares: Vec<BinaryForm> = forms.iter().map(|f| f.pow(2)).collect();
        let coords = (0..forms.len())
            .map(|i| {
                squares
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .fold(BinaryForm::one(), |acc, (_, q)| &acc * q)
            })
            .collect();
        Self::new(name, coords)
    }
}

/// Span of all products of the generators, truncated mod τ^len, in echelon
/// form by lowest order.
fn algebra_closure(gens: &[Vec<Rational>], len: usize) -> SparseEchelon {
    let mut ech = SparseEchelon::new();
    let mut queue: Vec<Vec<Rational>> = gens.to_vec();
    while let Some(v) = queue.pop() {
        let reduced = ech.reduce(SparseVec::from_dense(&v));
        if reduced.is_zero() {
            continue;
        }
        let dense = reduced.to_dense(len);
        ech.insert(reduced);
        for g in gens {
            let prod = series::mul(&dense, g, len);
            if prod.iter().any(|c| !c.is_zero()) {
                queue.push(prod);
            }
        }
    }
    ech
}

/// Conductor, once the values contain a full run of length equal to the
/// multiplicity strictly below the truncation.
fn conductor_from_values(values: &[usize], len: usize) -> Option<usize> {
    let mult = *values.first()?;
    let mut present = vec![false; len];
    present[0] = true;
    for &v in values {
        present[v] = true;
    }
    let mut run = 0;
    for k in 0..len {
        if present[k] {
            run += 1;
            if run == mult {
                let start = k + 1 - mult;
                let last_gap = (0..start).rev().find(|&i| !present[i]);
                return Some(last_gap.map_or(0, |g| g + 1));
            }
        } else {
            run = 0;
        }
    }
    None
}

fn build_cusp(p: &ParamPoint, j: usize, ech: &SparseEchelon, values: &[usize], conductor: usize) -> CuspData {
    let mult = values[0] as u64;
    let mut elements: Vec<u64> = values.iter().map(|&v| v as u64).filter(|&v| v < (conductor as u64 + mult)).collect();
    elements.extend(conductor as u64..conductor as u64 + mult);
    elements.sort_unstable();
    elements.dedup();
    let mut generators = Vec::new();
    for &x in &elements {
        let decomposable = elements.iter().any(|&a| a < x && elements.contains(&(x - a)));
        if !decomposable {
            generators.push(x);
        }
    }
    let delta = (0..conductor as u64)
        .filter(|k| *k != 0 && !values.contains(&(*k as usize)))
        .count() as u64;
    let mut rows: Vec<Vec<Rational>> = ech
        .reduced_rows()
        .into_iter()
        .map(|r| r.to_dense(values.iter().max().copied().unwrap_or(0) + 1))
        .map(|r| series::truncate(r, conductor))
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .collect();
    let mut one = vec![Rational::zero(); conductor];
    if conductor > 0 {
        one[0] = Rational::one();
        rows.push(one);
    }
    let local_ring = rref_rows(rows, conductor);
    let local_pivots = local_ring
        .iter()
        .map(|r| r.iter().position(|c| !c.is_zero()).unwrap())
        .collect();
    CuspData {
        point: p.clone(),
        point_form: BinaryForm::point_form(p),
        multiplicity: mult,
        semigroup: generators,
        delta,
        conductor: conductor as u64,
        unit_coord: j,
        local_ring,
        local_pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn curve(coords: &[&str]) -> ParamCurve {
        ParamCurve::new("test", coords.iter().map(|c| BinaryForm::parse(c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn e6_quartic_cusp() {
        let c = curve(&["s*t^3", "t^4", "(s^2 - t^2)^2"]);
        let cusps = c.cusp_analysis().unwrap();
        assert_eq!(cusps.len(), 1);
        assert_eq!(cusps[0].point, (rat(1), rat(0)));
        assert_eq!(cusps[0].semigroup, vec![3, 4]);
        assert_eq!(cusps[0].delta, 3);
        assert_eq!(cusps[0].conductor, 6);
        assert_eq!(c.arithmetic_genus().unwrap(), 3);
        assert_eq!(c.coordinate_span(2).dim(), 6);
    }

    #[test]
    fn conic_is_smooth() {
        let c = curve(&["s^2", "s*t", "t^2"]);
        assert!(c.cusp_analysis().unwrap().is_empty());
        assert_eq!(c.arithmetic_genus().unwrap(), 0);
    }

    #[test]
    fn cuspidal_cubic_residual() {
        let c = curve(&["s*t^2", "t^3", "s^3"]);
        let cusp = &c.cusp_analysis().unwrap()[0];
        assert_eq!(cusp.semigroup, vec![2, 3]);
        assert_eq!(cusp.gaps(), vec![1]);
        assert_eq!(cusp.residual(&[rat(5), rat(0), rat(1)]), vec![rat(0)]);
        assert_eq!(cusp.residual(&[rat(5), rat(2)]), vec![rat(2)]);
    }

    #[test]
    fn nodal_cubic_is_rejected() {
        // s = ±t both map to (0:0:1)
        let c = curve(&["s*(s^2 - t^2)", "t*(s^2 - t^2)", "s^3"]);
        let err = c.arithmetic_genus().unwrap_err();
        assert!(matches!(err, CurveError::PlaneGenusMismatch { .. }));
    }

    #[test]
    fn irrational_cusps_are_rejected() {
        // reciprocal curve of (s − √2 t, s + √2 t, t) in rational coordinates
        let c = curve(&["t^2*(s^2 + 2*t^2)", "2*s*t^3", "(s^2 - 2*t^2)^2"]);
        match c.cusp_analysis() {
            Err(CurveError::IrrationalCusp(rest)) => assert_eq!(rest, "s^2 - 2*t^2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reciprocal_curve_has_ordinary_cusps() {
        let c = ParamCurve::reciprocal_cusp_curve(
            "r",
            &[BinaryForm::s(), BinaryForm::t(), BinaryForm::parse("s + t").unwrap()],
        )
        .unwrap();
        let cusps = c.cusp_analysis().unwrap();
        assert_eq!(cusps.len(), 3);
        assert!(cusps.iter().all(|k| k.delta == 1 && k.semigroup == vec![2, 3]));
        assert_eq!(c.arithmetic_genus().unwrap(), 3);
    }

    #[test]
    fn base_points_rejected() {
        let err = ParamCurve::new(
            "bad",
            vec![BinaryForm::parse("s^2").unwrap(), BinaryForm::parse("s*t").unwrap(), BinaryForm::parse("s^2 + s*t").unwrap()],
        )
        .unwrap_err();
        assert!(matches!(err, CurveError::BasePoints(_)));
    }

    #[test]
    fn double_cover_is_not_birational() {
        let c = curve(&["s^4", "s^2*t^2", "t^4"]);
        assert!(!c.is_birational());
        assert!(curve(&["s*t^3", "t^4", "(s^2 - t^2)^2"]).is_birational());
    }
}
