//! Recursive-descent reader for polynomial expressions such as
//! `12/5*s^3*t^3 - (x^2 - y^3)^3`.
//!
//! Juxtaposition multiplies (`2x y` is `2*x*y`); `/` only divides by
//! nonzero constants.

use std::iter::Peekable;
use std::str::Chars;

use num_bigint::BigInt;
use num_traits::Zero;

use super::mpoly::{vars, MultiPoly, Vars};
use super::rational::Rational;
use super::AlgebraError;

/// Parse over the given variable names, each of weight one.
pub fn parse_polynomial(text: &str, names: &[&str]) -> Result<MultiPoly, AlgebraError> {
    let spec: Vec<(&str, u32)> = names.iter().map(|n| (*n, 1)).collect();
    parse_in(text, &vars(&spec))
}

/// Parse over an existing variable list.
pub fn parse_in(text: &str, vars: &Vars) -> Result<MultiPoly, AlgebraError> {
    let mut p = Parser { chars: text.chars().peekable(), vars, text };
    let out = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.chars.peek().copied() {
        return Err(p.error(&format!("unexpected '{c}'")));
    }
    Ok(out)
}

struct Parser<'a> {
    chars: Peekable<Chars<'a>>,
    vars: &'a Vars,
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} in '{}'", self.text))
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.chars.next();
                -&self.term()?
            }
            Some('+') => {
                self.chars.next();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.chars.next();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.chars.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.chars.next();
                    acc = &acc * &self.power()?;
                }
                Some('/') => {
                    self.chars.next();
                    let d = self.power()?;
                    let c = constant_value(&d).ok_or_else(|| self.error("division by a non-constant"))?;
                    if c.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.scale(&c.recip());
                }
                Some(c) if c == '(' || c.is_alphanumeric() || c == '_' => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.chars.next();
            self.skip_ws();
            let k = self.integer()?;
            let k: u32 = k.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        let mut digits = String::new();
        while let Some(c) = self.chars.peek().copied().filter(|c| c.is_ascii_digit()) {
            digits.push(c);
            self.chars.next();
        }
        if digits.is_empty() {
            return Err(self.error("expected an integer"));
        }
        Ok(digits.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<MultiPoly, AlgebraError> {
        match self.peek() {
            Some('(') => {
                self.chars.next();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("missing ')'"));
                }
                self.chars.next();
                Ok(inner)
            }
            Some('-') => {
                self.chars.next();
                Ok(-&self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(MultiPoly::constant(self.vars, Rational::from_integer(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(c) = self.chars.peek().copied().filter(|c| c.is_alphanumeric() || *c == '_') {
                    name.push(c);
                    self.chars.next();
                }
                MultiPoly::var(self.vars, &name)
            }
            Some(c) => Err(self.error(&format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn constant_value(p: &MultiPoly) -> Option<Rational> {
    if p.is_zero() {
        return Some(Rational::zero());
    }
    if p.num_terms() == 1 {
        let (e, c) = p.terms().iter().next().unwrap();
        if e.iter().all(|k| *k == 0) {
            return Some(c.clone());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    #[test]
    fn precedence_and_rationals() {
        let p = parse_polynomial("12/5*s^3*t^3 + 4/75 t^6 - -s", &["s", "t"]).unwrap();
        let q = parse_polynomial("s + (12 s^3 t^3)/5 + (4/75)*t^6", &["s", "t"]).unwrap();
        assert_eq!(p, q);
        let c = parse_polynomial("2^3/4", &["s"]).unwrap();
        assert_eq!(constant_value(&c), Some(ratio(2, 1)));
    }

    #[test]
    fn multi_letter_and_unicode_names() {
        let v = vars(&[("zeta", 2), ("ζ", 2), ("v0", 3)]);
        let p = parse_in("zeta^2 - ζ v0", &v).unwrap();
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn errors_are_reported() {
        assert!(parse_polynomial("s +", &["s"]).is_err());
        assert!(parse_polynomial("(s", &["s"]).is_err());
        assert!(parse_polynomial("s/t", &["s", "t"]).is_err());
        assert!(matches!(
            parse_polynomial("q", &["s"]),
            Err(AlgebraError::UnboundVariable(_))
        ));
    }
}
