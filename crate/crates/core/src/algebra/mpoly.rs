//! Sparse multivariate polynomials over the rationals in named, weighted
//! variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bform::BinaryForm;
use super::rational::{format_rational, Rational};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    #[serde(default = "default_weight")]
    pub weight: u32,
}

fn default_weight() -> u32 {
    1
}

pub type Vars = Arc<[Var]>;

/// Build a variable list from `(name, weight)` pairs.
pub fn vars(spec: &[(&str, u32)]) -> Vars {
    spec.iter()
        .map(|(n, w)| Var { name: n.to_string(), weight: *w })
        .collect::<Vec<_>>()
        .into()
}

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Exponent, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self, AlgebraError> {
        let i = index_of(vars, name)?;
        Ok(Self::var_at(vars, i))
    }

    pub fn var_at(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    pub fn monomial(vars: &Vars, exp: Exponent, c: Rational) -> Self {
        assert_eq!(exp.len(), vars.len(), "exponent length must match variable count");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length must match variable count");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize, AlgebraError> {
        index_of(&self.vars, name)
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn weighted_degree_of(&self, exp: &[u32]) -> u64 {
        exp.iter().zip(self.vars.iter()).map(|(e, v)| *e as u64 * v.weight as u64).sum()
    }

    /// Largest weighted degree of a term; `None` for the zero polynomial.
    pub fn weighted_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| self.weighted_degree_of(e)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| self.weighted_degree_of(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Split into weighted-homogeneous components keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u64, MultiPoly> {
        let mut out: BTreeMap<u64, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(self.weighted_degree_of(e))
                .or_insert_with(|| Self::zero(&self.vars))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(&self.vars);
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

    /// Variables occurring with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn eval(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.vars.len());
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.clone();
                for (x, k) in values.iter().zip(e) {
                    for _ in 0..*k {
                        v *= x;
                    }
                }
                v
            })
            .sum()
    }

    /// Substitute binary forms for the variables.
    ///
    /// Binding degrees must be proportional to the variable weights, and the
    /// polynomial must be weighted homogeneous.
    pub fn subst_forms(&self, bindings: &HashMap<String, BinaryForm>) -> Result<BinaryForm, AlgebraError> {
        let used = self.support_vars();
        let mut scale: Option<(usize, u32)> = None;
        for &i in &used {
            let v = &self.vars[i];
            let f = bindings
                .get(&v.name)
                .ok_or_else(|| AlgebraError::UnboundVariable(v.name.clone()))?;
            match scale {
                None => scale = Some((f.degree(), v.weight)),
                Some((d0, w0)) => {
                    if f.degree() as u64 * w0 as u64 != d0 as u64 * v.weight as u64 {
                        return Err(AlgebraError::InconsistentBinding(format!(
                            "'{}' of weight {} bound to a form of degree {}",
                            v.name,
                            v.weight,
                            f.degree()
                        )));
                    }
                }
            }
        }
        if !self.is_homogeneous() {
            return Err(AlgebraError::NotHomogeneous);
        }
        let Some(wdeg) = self.weighted_degree() else {
            return Ok(BinaryForm::zero(0));
        };
        let degree = match scale {
            None => 0,
            Some((d0, w0)) => {
                let num = wdeg * d0 as u64;
                if num % w0 as u64 != 0 {
                    return Err(AlgebraError::InconsistentBinding(
                        "binding degrees are not an integral multiple of the weights".into(),
                    ));
                }
                (num / w0 as u64) as usize
            }
        };
        let mut powers: Vec<Vec<BinaryForm>> = vec![Vec::new(); self.vars.len()];
        for &i in &used {
            let f = &bindings[&self.vars[i].name];
            let maxe = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            let mut pw = vec![BinaryForm::one()];
            for k in 1..=maxe as usize {
                let next = &pw[k - 1] * f;
                pw.push(next);
            }
            powers[i] = pw;
        }
        let mut out = BinaryForm::zero(degree);
        for (e, c) in &self.terms {
            let mut term = BinaryForm::constant(c.clone());
            for &i in &used {
                if e[i] > 0 {
                    term = &term * &powers[i][e[i] as usize];
                }
            }
            if term.degree() != degree {
                // constant term with no variables in a positive-degree polynomial
                return Err(AlgebraError::NotHomogeneous);
            }
            out.add_scaled(&Rational::one(), &term);
        }
        Ok(out)
    }

    /// Substitute polynomials over a common target variable list.
    pub fn subst_polys(&self, bindings: &HashMap<String, MultiPoly>, target: &Vars) -> Result<MultiPoly, AlgebraError> {
        let used = self.support_vars();
        let mut powers: Vec<Vec<MultiPoly>> = vec![Vec::new(); self.vars.len()];
        for &i in &used {
            let name = &self.vars[i].name;
            let p = bindings.get(name).ok_or_else(|| AlgebraError::UnboundVariable(name.clone()))?;
            if p.vars != *target {
                return Err(AlgebraError::VariableMismatch(format!("binding for '{name}'")));
            }
            let maxe = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            let mut pw = vec![MultiPoly::one(target)];
            for k in 1..=maxe as usize {
                let next = &pw[k - 1] * p;
                pw.push(next);
            }
            powers[i] = pw;
        }
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for &i in &used {
                if e[i] > 0 {
                    term = &term * &powers[i][e[i] as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Re-express over a variable list containing every used variable by name.
    pub fn embed(&self, target: &Vars) -> Result<MultiPoly, AlgebraError> {
        if self.vars == *target {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|w| w.name == v.name))
            .collect();
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, k) in e.iter().enumerate() {
                if *k == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| AlgebraError::UnboundVariable(self.vars[i].name.clone()))?;
                ne[j] += k;
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut ne = e.clone();
                ne[i] -= 1;
                out.add_term(ne, c * Rational::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Read a polynomial in `s`, `t` (each of weight one) as a binary form.
    pub fn to_binary_form(&self) -> Result<BinaryForm, AlgebraError> {
        let si = self.vars.iter().position(|v| v.name == "s");
        let ti = self.vars.iter().position(|v| v.name == "t");
        for (i, v) in self.vars.iter().enumerate() {
            if Some(i) != si && Some(i) != ti && self.terms.keys().any(|e| e[i] > 0) {
                return Err(AlgebraError::UnboundVariable(v.name.clone()));
            }
        }
        let deg_of = |e: &Exponent| si.map_or(0, |i| e[i]) + ti.map_or(0, |i| e[i]);
        let mut degs = self.terms.keys().map(deg_of);
        let Some(d) = degs.next() else {
            return Ok(BinaryForm::zero(0));
        };
        if degs.any(|x| x != d) {
            return Err(AlgebraError::NotHomogeneous);
        }
        let mut f = BinaryForm::zero(d as usize);
        for (e, c) in &self.terms {
            let i = ti.map_or(0, |i| e[i]) as usize;
            f.add_scaled(c, &BinaryForm::monomial(d as usize, i, Rational::one()));
        }
        Ok(f)
    }

    pub fn from_binary_form(f: &BinaryForm, vars: &Vars) -> Result<MultiPoly, AlgebraError> {
        let si = index_of(vars, "s")?;
        let ti = index_of(vars, "t")?;
        let e = f.degree() as u32;
        let mut out = MultiPoly::zero(vars);
        for (i, c) in f.coeffs().iter().enumerate() {
            let mut exp = vec![0; vars.len()];
            exp[si] = e - i as u32;
            exp[ti] += i as u32;
            out.add_term(exp, c.clone());
        }
        Ok(out)
    }

    /// Terms in display order: descending weighted degree, then descending
    /// exponent vector.
    pub fn sorted_terms(&self) -> Vec<(&Exponent, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            self.weighted_degree_of(b.0)
                .cmp(&self.weighted_degree_of(a.0))
                .then_with(|| b.0.cmp(a.0))
        });
        v
    }

    pub fn monomial_string(&self, e: &[u32]) -> String {
        let mut parts = Vec::new();
        for (v, k) in self.vars.iter().zip(e) {
            match k {
                0 => {}
                1 => parts.push(v.name.clone()),
                _ => parts.push(format!("{}^{k}", v.name)),
            }
        }
        parts.join("*")
    }
}

pub(crate) fn index_of(vars: &Vars, name: &str) -> Result<usize, AlgebraError> {
    vars.iter()
        .position(|v| v.name == name)
        .ok_or_else(|| AlgebraError::UnboundVariable(name.to_string()))
}

fn check_vars(a: &MultiPoly, b: &MultiPoly) {
    assert!(
        Arc::ptr_eq(&a.vars, &b.vars) || a.vars == b.vars,
        "polynomials over different variable lists"
    );
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        check_vars(self, rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        check_vars(self, rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        check_vars(self, rhs);
        let mut out = MultiPoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let body = self.monomial_string(e);
            if body.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{}*{body}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    #[serde(with = "super::rational::serde_rational")]
    c: Rational,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<Var>,
    terms: Vec<TermRepr>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            vars: self.vars.to_vec(),
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(e, c)| TermRepr { exp: e.clone(), c: c.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        let vars: Vars = repr.vars.into();
        let mut p = MultiPoly::zero(&vars);
        for t in repr.terms {
            if t.exp.len() != vars.len() {
                return Err(serde::de::Error::custom(format!(
                    "exponent vector of length {} for {} variables",
                    t.exp.len(),
                    vars.len()
                )));
            }
            p.add_term(t.exp, t.c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_in;

    fn xyz() -> Vars {
        vars(&[("x", 1), ("y", 1), ("z", 1)])
    }

    fn forms(list: &[(&str, &str)]) -> HashMap<String, BinaryForm> {
        list.iter()
            .map(|(n, f)| (n.to_string(), BinaryForm::parse(f).unwrap()))
            .collect()
    }

    #[test]
    fn e6_quartic_parametrization_vanishes() {
        let p = parse_in("(x^2 - y^2)^2 - y^3*z", &xyz()).unwrap();
        let b = forms(&[("x", "s*t^3"), ("y", "t^4"), ("z", "(s^2 - t^2)^2")]);
        assert!(p.subst_forms(&b).unwrap().is_zero());
        let q = parse_in("x^4 - y^3*z", &xyz()).unwrap();
        let b = forms(&[("x", "t*s^3"), ("y", "s^4"), ("z", "t^4")]);
        assert!(q.subst_forms(&b).unwrap().is_zero());
    }

    #[test]
    fn identity_substitution() {
        let v = xyz();
        let p = parse_in("x^3 - 2/3*x*y*z + z^3", &v).unwrap();
        let b: HashMap<String, MultiPoly> =
            ["x", "y", "z"].iter().map(|n| (n.to_string(), MultiPoly::var(&v, n).unwrap())).collect();
        assert_eq!(p.subst_polys(&b, &v).unwrap(), p);
    }

    #[test]
    fn unbound_and_inconsistent_bindings() {
        let p = parse_in("x*y - z^2", &xyz()).unwrap();
        let err = p.subst_forms(&forms(&[("x", "s"), ("y", "t")])).unwrap_err();
        assert_eq!(err, AlgebraError::UnboundVariable("z".into()));
        let err = p.subst_forms(&forms(&[("x", "s"), ("y", "t"), ("z", "s*t")])).unwrap_err();
        assert!(matches!(err, AlgebraError::InconsistentBinding(_)));
    }

    #[test]
    fn weighted_degrees() {
        let v = vars(&[("s", 2), ("u", 3)]);
        let p = parse_in("4*s^3 + u^2", &v).unwrap();
        assert!(p.is_homogeneous());
        assert_eq!(p.weighted_degree(), Some(6));
        let q = parse_in("u^2*s + s", &v).unwrap();
        assert!(!q.is_homogeneous());
        assert_eq!(q.homogeneous_components().len(), 2);
    }

    #[test]
    fn display_and_serde_round_trip() {
        let v = xyz();
        let p = parse_in("-3/2*x^2*y + z - 7", &v).unwrap();
        assert_eq!(parse_in(&p.to_string(), &v).unwrap(), p);
        let json = serde_json::to_string(&p).unwrap();
        let back: MultiPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
