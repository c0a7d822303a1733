//! Truncated power series in one variable τ, stored as coefficient vectors of
//! a fixed length (everything from τ^len on is dropped).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::Rational;

pub fn truncate(mut a: Vec<Rational>, len: usize) -> Vec<Rational> {
    a.resize(len, Rational::zero());
    a
}

pub fn mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Multiplicative inverse; the constant term must be nonzero.
pub fn inverse(a: &[Rational], len: usize) -> Vec<Rational> {
    let a0 = a.first().filter(|c| !c.is_zero()).expect("series is not a unit");
    let inv0 = a0.recip();
    let mut out = vec![Rational::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = inv0.clone();
    for k in 1..len {
        let mut acc = Rational::zero();
        for i in 1..=k.min(a.len() - 1) {
            acc += &a[i] * &out[k - i];
        }
        out[k] = -acc * &inv0;
    }
    out
}

/// (1 + w)^α by the binomial series, for w without constant term.
pub fn one_plus_pow(w: &[Rational], alpha: &Rational, len: usize) -> Vec<Rational> {
    debug_assert!(w.first().map_or(true, |c| c.is_zero()));
    let mut out = vec![Rational::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = Rational::one();
    let mut wk = truncate(vec![Rational::one()], len);
    let mut binom = Rational::one();
    for k in 1..len {
        wk = mul(&wk, w, len);
        if wk.iter().all(|c| c.is_zero()) {
            break;
        }
        binom = binom * (alpha - Rational::from_integer(BigInt::from(k - 1)))
            / Rational::from_integer(BigInt::from(k));
        for (o, c) in out.iter_mut().zip(&wk) {
            *o += &binom * c;
        }
    }
    out
}

/// u^α / u(0)^α for a unit u.
pub fn normalized_unit_pow(u: &[Rational], alpha: &Rational, len: usize) -> Vec<Rational> {
    let u0 = u[0].clone();
    assert!(!u0.is_zero(), "series is not a unit");
    let mut w: Vec<Rational> = truncate(u.to_vec(), len).into_iter().map(|c| c / &u0).collect();
    if let Some(c) = w.first_mut() {
        *c = Rational::zero();
    }
    one_plus_pow(&w, alpha, len)
}

pub fn order(a: &[Rational]) -> Option<usize> {
    a.iter().position(|c| !c.is_zero())
}
