//! Evaluation of polynomial and small matrix expressions on binary-form
//! bindings.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::mpoly::Vars;
use crate::algebra::{parse_in, AlgebraError, BinaryForm, MultiPoly, Var};

/// Named binary forms; each name becomes a variable weighted by its degree.
#[derive(Debug, Clone, Default)]
pub struct FormEnv {
    pub forms: BTreeMap<String, BinaryForm>,
}

impl FormEnv {
    pub fn insert(&mut self, name: &str, f: BinaryForm) {
        self.forms.insert(name.to_string(), f);
    }

    pub fn vars(&self) -> Vars {
        self.forms
            .iter()
            .map(|(n, f)| Var { name: n.clone(), weight: f.degree() as u32 })
            .collect::<Vec<_>>()
            .into()
    }

    pub fn map(&self) -> HashMap<String, BinaryForm> {
        self.forms.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn parse(&self, text: &str) -> Result<MultiPoly, AlgebraError> {
        parse_in(text, &self.vars())
    }

    pub fn eval(&self, text: &str) -> Result<BinaryForm, AlgebraError> {
        self.parse(text)?.subst_forms(&self.map())
    }
}

/// Sum that lets a zero form of any degree absorb into the other summand.
pub fn add(a: &BinaryForm, b: &BinaryForm) -> Result<BinaryForm, AlgebraError> {
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    a.checked_add(b)
}

type FMat = Vec<Vec<BinaryForm>>;

fn det(m: &FMat) -> Result<BinaryForm, AlgebraError> {
    match m.len() {
        0 => Ok(BinaryForm::one()),
        1 => Ok(m[0][0].clone()),
        n => {
            let mut acc = BinaryForm::zero(0);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor = minor(m, 0, j);
                let mut term = &m[0][j] * &det(&minor)?;
                if j % 2 == 1 {
                    term = -&term;
                }
                acc = add(&acc, &term)?;
            }
            Ok(acc)
        }
    }
}

fn minor(m: &FMat, r: usize, c: usize) -> FMat {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
        .collect()
}

fn cofactors(m: &FMat) -> Result<FMat, AlgebraError> {
    let n = m.len();
    let mut out = vec![vec![BinaryForm::zero(0); n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let d = det(&minor(m, i, j))?;
            *x = if (i + j) % 2 == 1 { -&d } else { d };
        }
    }
    Ok(out)
}

fn transpose(m: &FMat) -> FMat {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

fn mat_mul(a: &FMat, b: &FMat) -> Result<FMat, AlgebraError> {
    let inner = a.first().map_or(0, |r| r.len());
    if inner != b.len() {
        return Err(AlgebraError::DimensionMismatch { expected: inner, found: b.len() });
    }
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![BinaryForm::zero(0); cols]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for j in 0..cols {
            let mut acc = BinaryForm::zero(0);
            for (k, x) in row.iter().enumerate() {
                if !x.is_zero() && !b[k][j].is_zero() {
                    acc = add(&acc, &(x * &b[k][j]))?;
                }
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

fn mat_add(a: &FMat, b: &FMat, negate: bool) -> Result<FMat, AlgebraError> {
    if a.len() != b.len() || a.first().map(|r| r.len()) != b.first().map(|r| r.len()) {
        return Err(AlgebraError::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .map(|(x, y)| if negate { add(x, &-y) } else { add(x, y) })
                .collect()
        })
        .collect()
}

/// Matrices and column vectors of evaluated forms.
pub struct MatrixEnv {
    pub mats: HashMap<String, FMat>,
}

impl MatrixEnv {
    /// Evaluate `A*B`, `X^T`, `adj(X)`, `cof(X)`, sums and differences.
    pub fn eval(&self, text: &str) -> Result<FMat, AlgebraError> {
        let toks = tokenize(text)?;
        let mut p = MatParser { toks: &toks, pos: 0, env: self, text };
        let m = p.expr()?;
        if p.pos != toks.len() {
            return Err(AlgebraError::Parse(format!("trailing input in '{text}'")));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>, AlgebraError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_alphanumeric() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_alphanumeric() || d == '_' {
                    s.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Tok::Name(s));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Sym(c));
            chars.next();
        } else {
            return Err(AlgebraError::Parse(format!("unexpected '{c}' in '{text}'")));
        }
    }
    Ok(out)
}

struct MatParser<'a> {
    toks: &'a [Tok],
    pos: usize,
    env: &'a MatrixEnv,
    text: &'a str,
}

impl MatParser<'_> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} in '{}'", self.text))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.toks.get(self.pos) == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<FMat, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = mat_add(&acc, &self.term()?, false)?;
            } else if self.eat('-') {
                acc = mat_add(&acc, &self.term()?, true)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FMat, AlgebraError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = mat_mul(&acc, &self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FMat, AlgebraError> {
        let m = if self.eat('(') {
            let m = self.expr()?;
            if !self.eat(')') {
                return Err(self.err("missing ')'"));
            }
            m
        } else {
            let Some(Tok::Name(name)) = self.toks.get(self.pos).cloned() else {
                return Err(self.err("expected a matrix name"));
            };
            self.pos += 1;
            if (name == "adj" || name == "cof") && self.eat('(') {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing ')'"));
                }
                let c = cofactors(&inner)?;
                if name == "adj" { transpose(&c) } else { c }
            } else {
                self.env.mats.get(&name).cloned().ok_or_else(|| self.err(&format!("unknown matrix '{name}'")))?
            }
        };
        if self.eat('^') {
            match self.toks.get(self.pos) {
                Some(Tok::Name(t)) if t == "T" => {
                    self.pos += 1;
                    return Ok(transpose(&m));
                }
                _ => return Err(self.err("only ^T is supported")),
            }
        }
        Ok(m)
    }
}

pub fn is_zero_matrix(m: &FMat) -> bool {
    m.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn column(v: Vec<BinaryForm>) -> FMat {
    v.into_iter().map(|x| vec![x]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(t: &str) -> BinaryForm {
        BinaryForm::parse(t).unwrap()
    }

    #[test]
    fn adjugate_of_diagonal() {
        let m = vec![vec![f("s"), BinaryForm::zero(1)], vec![BinaryForm::zero(1), f("t")]];
        let env = MatrixEnv { mats: [("M".to_string(), m)].into_iter().collect() };
        let a = env.eval("adj(M)").unwrap();
        assert_eq!(a[0][0], f("t"));
        assert_eq!(a[1][1], f("s"));
        assert!(is_zero_matrix(&env.eval("M*adj(M) - adj(M)*M").unwrap()));
        assert!(env.eval("M^X").is_err());
    }
}
