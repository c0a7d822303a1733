//! Binary forms Σ cᵢ s^{e−i} tⁱ with dense rational coefficients.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linalg::MatrixQ;
use super::rational::{format_rational, Rational};
use super::upoly::UPoly;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<Rational>,
}

/// A point (a:b) of the parameter line, normalized to (1:0) or (a:1).
pub type ParamPoint = (Rational, Rational);

impl BinaryForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs degree+1 coefficients");
        BinaryForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm { coeffs: vec![Rational::zero(); degree + 1] }
    }

    pub fn constant(c: Rational) -> Self {
        BinaryForm { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// c · s^{degree−i} tⁱ
    pub fn monomial(degree: usize, i: usize, c: Rational) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[i] = c;
        f
    }

    pub fn s() -> Self {
        Self::from_ints(&[1, 0])
    }

    pub fn t() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// a·s + b·t
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_degree(other)?;
        Ok(BinaryForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_degree(other)?;
        Ok(BinaryForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_degree(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.degree() != other.degree() {
            return Err(AlgebraError::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(())
    }

    /// In-place `self += c·other`; degrees must agree.
    pub fn add_scaled(&mut self, c: &Rational, other: &Self) {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in add_scaled");
        if c.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BinaryForm { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Number of trailing zero coefficients: the power of s dividing the form.
    pub fn s_valuation(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// Number of leading zero coefficients: the power of t dividing the form.
    pub fn t_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// F(1, t) as a univariate polynomial in t.
    fn dehomogenize(&self) -> UPoly {
        UPoly::new(self.coeffs.clone())
    }

    fn homogenize(p: &UPoly, degree: usize) -> Self {
        let mut coeffs = p.coeffs().to_vec();
        assert!(coeffs.len() <= degree + 1);
        coeffs.resize(degree + 1, Rational::zero());
        BinaryForm { coeffs }
    }

    /// Exact quotient `self / divisor`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        assert!(!divisor.is_zero(), "division by the zero form");
        if self.is_zero() {
            return Ok(Self::zero(self.degree().saturating_sub(divisor.degree())));
        }
        if divisor.degree() > self.degree() || divisor.s_valuation() > self.s_valuation() {
            return Err(AlgebraError::NotDivisible { remainder_degree: self.degree() });
        }
        let (q, r) = self.dehomogenize().div_rem(&divisor.dehomogenize());
        if let Some(d) = r.degree() {
            return Err(AlgebraError::NotDivisible { remainder_degree: d });
        }
        Ok(Self::homogenize(&q, self.degree() - divisor.degree()))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_ok()
    }

    /// Scale so that the first nonzero coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(lead) => self.scale(&lead.recip()),
        }
    }

    /// Monic greatest common divisor (first nonzero coefficient 1).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.normalized();
        }
        if b.is_zero() {
            return a.normalized();
        }
        let sv = a.s_valuation().min(b.s_valuation());
        let g = UPoly::gcd(&a.dehomogenize(), &b.dehomogenize());
        let deg = g.degree().unwrap_or(0) + sv;
        Self::homogenize(&g, deg).normalized()
    }

    /// Product of the distinct irreducible factors (the radical), normalized.
    pub fn squarefree(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let sv = self.s_valuation();
        let p = self.dehomogenize().squarefree();
        let deg = p.degree().unwrap_or(0) + usize::from(sv > 0);
        Self::homogenize(&p, deg).normalized()
    }

    /// Resultant via the Sylvester determinant of the coefficient sequences.
    pub fn resultant(a: &Self, b: &Self) -> Rational {
        let (m, n) = (a.degree(), b.degree());
        let size = m + n;
        if size == 0 {
            return Rational::one();
        }
        let mut mat = MatrixQ::zeros(size, size);
        for row in 0..n {
            for (i, c) in a.coeffs.iter().enumerate() {
                mat.set(row, row + i, c.clone());
            }
        }
        for row in 0..m {
            for (i, c) in b.coeffs.iter().enumerate() {
                mat.set(n + row, row + i, c.clone());
            }
        }
        mat.determinant()
    }

    pub fn eval(&self, s: &Rational, t: &Rational) -> Rational {
        let e = self.degree();
        let mut spow = vec![Rational::one(); e + 1];
        let mut tpow = vec![Rational::one(); e + 1];
        for i in 1..=e {
            spow[i] = &spow[i - 1] * s;
            tpow[i] = &tpow[i - 1] * t;
        }
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * &spow[e - i] * &tpow[i])
            .sum()
    }

    pub fn vanishes_at(&self, p: &ParamPoint) -> bool {
        self.eval(&p.0, &p.1).is_zero()
    }

    pub fn derivative_s(&self) -> Self {
        let e = self.degree();
        if e == 0 {
            return Self::zero(0);
        }
        BinaryForm {
            coeffs: (0..e)
                .map(|i| &self.coeffs[i] * Rational::from_integer(BigInt::from(e - i)))
                .collect(),
        }
    }

    pub fn derivative_t(&self) -> Self {
        let e = self.degree();
        if e == 0 {
            return Self::zero(0);
        }
        BinaryForm {
            coeffs: (1..=e)
                .map(|i| &self.coeffs[i] * Rational::from_integer(BigInt::from(i)))
                .collect(),
        }
    }

    /// G(s,t) = F(a·s + b·t, c·s + d·t).
    pub fn compose_linear(&self, a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Self {
        let e = self.degree();
        let l1 = Self::linear(a.clone(), b.clone());
        let l2 = Self::linear(c.clone(), d.clone());
        let mut p1 = vec![Self::one()];
        let mut p2 = vec![Self::one()];
        for i in 1..=e {
            p1.push(&p1[i - 1] * &l1);
            p2.push(&p2[i - 1] * &l2);
        }
        let mut out = Self::zero(e);
        for (i, coef) in self.coeffs.iter().enumerate() {
            if !coef.is_zero() {
                out.add_scaled(coef, &(&p1[e - i] * &p2[i]));
            }
        }
        out
    }

    /// Coefficients of F(a + cτ, b + dτ) in powers of τ, where (c, d)
    /// completes (a, b) to a basis.
    pub fn local_expansion(&self, p: &ParamPoint) -> Vec<Rational> {
        let (c, d) = complement_direction(p);
        self.compose_linear(&p.0, &c, &p.1, &d).coeffs
    }

    /// Order of vanishing at a parameter point.
    pub fn order_at(&self, p: &ParamPoint) -> Option<usize> {
        self.local_expansion(p).iter().position(|c| !c.is_zero())
    }

    /// Distinct rational points (a:b) where the form vanishes.
    pub fn rational_roots(&self) -> Vec<ParamPoint> {
        assert!(!self.is_zero(), "the zero form vanishes everywhere");
        let mut out = Vec::new();
        if self.coeffs[0].is_zero() {
            out.push((Rational::one(), Rational::zero()));
        }
        // F(x, 1) = Σ cᵢ x^{e−i}
        let rev: Vec<Rational> = self.coeffs.iter().rev().cloned().collect();
        for x in UPoly::new(rev).rational_roots() {
            out.push((x, Rational::one()));
        }
        out
    }

    /// The monic linear form b·s − a·t vanishing at (a:b).
    pub fn point_form(p: &ParamPoint) -> Self {
        Self::linear(p.1.clone(), -p.0.clone()).normalized()
    }

    /// Inverse of [`BinaryForm::point_form`] on a linear form.
    pub fn linear_root(&self) -> ParamPoint {
        assert_eq!(self.degree(), 1, "not a linear form");
        normalize_point(&(-self.coeffs[1].clone(), self.coeffs[0].clone()))
    }

    /// Parse a homogeneous expression in `s` and `t`.
    pub fn parse(text: &str) -> Result<Self, AlgebraError> {
        let p = super::parse::parse_polynomial(text, &["s", "t"])?;
        p.to_binary_form()
    }

    /// Parse, padding the zero polynomial to the requested degree.
    pub fn parse_with_degree(text: &str, degree: usize) -> Result<Self, AlgebraError> {
        let p = super::parse::parse_polynomial(text, &["s", "t"])?;
        if p.is_zero() {
            return Ok(Self::zero(degree));
        }
        let f = p.to_binary_form()?;
        if f.degree() != degree {
            return Err(AlgebraError::DegreeMismatch { expected: degree, found: f.degree() });
        }
        Ok(f)
    }
}

pub fn normalize_point(p: &ParamPoint) -> ParamPoint {
    if p.1.is_zero() {
        (Rational::one(), Rational::zero())
    } else {
        (&p.0 / &p.1, Rational::one())
    }
}

fn complement_direction(p: &ParamPoint) -> (Rational, Rational) {
    if p.0.is_zero() {
        (Rational::one(), Rational::zero())
    } else {
        (Rational::zero(), Rational::one())
    }
}

impl Mul for &BinaryForm {
    type Output = BinaryForm;

    fn mul(self, rhs: &BinaryForm) -> BinaryForm {
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        BinaryForm { coeffs }
    }
}

impl Mul for BinaryForm {
    type Output = BinaryForm;

    fn mul(self, rhs: BinaryForm) -> BinaryForm {
        &self * &rhs
    }
}

impl Neg for &BinaryForm {
    type Output = BinaryForm;

    fn neg(self) -> BinaryForm {
        BinaryForm { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut factors = Vec::new();
            for (name, k) in [("s", e - i), ("t", i)] {
                match k {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let body = factors.join("*");
            if body.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{}*{body}", format_rational(&mag))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    degree: usize,
    #[serde(with = "super::rational::serde_rational_vec")]
    coeffs: Vec<Rational>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FormInput {
    Dense(FormRepr),
    Expr(String),
}

impl Serialize for BinaryForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FormRepr { degree: self.degree(), coeffs: self.coeffs.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BinaryForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match FormInput::deserialize(deserializer)? {
            FormInput::Dense(r) => {
                if r.coeffs.len() != r.degree + 1 {
                    return Err(serde::de::Error::custom(format!(
                        "binary form of degree {} needs {} coefficients, found {}",
                        r.degree,
                        r.degree + 1,
                        r.coeffs.len()
                    )));
                }
                Ok(BinaryForm { coeffs: r.coeffs })
            }
            FormInput::Expr(text) => BinaryForm::parse(&text).map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};

    fn f(text: &str) -> BinaryForm {
        BinaryForm::parse(text).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let p = &f("s^2 - t^2") * &f("s^2 + t^2");
        assert_eq!(p, f("s^4 - t^4"));
        assert_eq!(p.div_exact(&f("s^2 - t^2")).unwrap(), f("s^2 + t^2"));
    }

    #[test]
    fn non_divisor_reports_remainder_degree() {
        let err = f("s^4 - t^4").div_exact(&f("s^2 - 2*t^2")).unwrap_err();
        assert_eq!(err, AlgebraError::NotDivisible { remainder_degree: 0 });
        assert!(f("s*t").div_exact(&f("s^2")).is_err());
        assert_eq!(f("s^2*t").div_exact(&f("s*t")).unwrap(), f("s"));
    }

    #[test]
    fn gcd_is_monic() {
        let g = BinaryForm::gcd(&f("s^3 - s*t^2"), &f("s^2*t - t^3"));
        assert_eq!(g, f("s^2 - t^2"));
        assert_eq!(BinaryForm::gcd(&f("2*t^2*s"), &f("3*t^3")), f("t^2"));
        assert_eq!(BinaryForm::gcd(&f("s^2"), &f("s*t")), f("s"));
    }

    #[test]
    fn radical_and_roots() {
        let sq = f("s^3*t^2 - s*t^4").squarefree();
        assert_eq!(sq, f("s^3*t - s*t^3"));
        let roots = f("s^2*t - t^3").rational_roots();
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&(rat(1), rat(0))));
        assert!(roots.contains(&(rat(1), rat(1))));
        assert!(roots.contains(&(rat(-1), rat(1))));
    }

    #[test]
    fn resultant_detects_common_root() {
        assert!(BinaryForm::resultant(&f("s^2 - t^2"), &f("s*t - t^2")).is_zero());
        // Res(s - a t, s - b t) = a - b up to sign
        let r = BinaryForm::resultant(&f("s - 2*t"), &f("s - 5*t"));
        assert_eq!(r.abs(), rat(3));
    }

    #[test]
    fn local_expansion_orders() {
        let cusp = (rat(1), rat(0));
        assert_eq!(f("s*t^3").order_at(&cusp), Some(3));
        assert_eq!(f("s^2 - t^2").order_at(&(rat(1), rat(1))), Some(1));
        assert_eq!(f("(s-t)^2*s").order_at(&(rat(1), rat(1))), Some(2));
        assert_eq!(f("t^2").order_at(&(rat(0), rat(1))), Some(0));
    }

    #[test]
    fn display_round_trips() {
        for text in ["4*s^3 + 3*t^3", "-s^2*t + 12/5*t^3", "s", "-7"] {
            let g = f(text);
            assert_eq!(f(&g.to_string()), g);
        }
        assert_eq!(f("s^6 + 12/5*s^3*t^3 + 4/75*t^6").to_string(), "s^6 + 12/5*s^3*t^3 + 4/75*t^6");
        assert_eq!(BinaryForm::zero(3).to_string(), "0");
    }

    #[test]
    fn derivatives_satisfy_euler() {
        let g = f("s^3 - 2*s*t^2 + 5*t^3");
        let euler = (&BinaryForm::s() * &g.derivative_s())
            .checked_add(&(&BinaryForm::t() * &g.derivative_t()))
            .unwrap();
        assert_eq!(euler, g.scale(&rat(3)));
    }

    #[test]
    fn serde_accepts_both_encodings() {
        let dense: BinaryForm =
            serde_json::from_str(r#"{"degree": 2, "coeffs": ["1", 0, "-1/2"]}"#).unwrap();
        assert_eq!(dense, BinaryForm::new(vec![rat(1), rat(0), ratio(-1, 2)]));
        let expr: BinaryForm = serde_json::from_str(r#""s^2 - 1/2*t^2""#).unwrap();
        assert_eq!(dense, expr);
        let back: BinaryForm = serde_json::from_str(&serde_json::to_string(&dense).unwrap()).unwrap();
        assert_eq!(back, dense);
    }
}
