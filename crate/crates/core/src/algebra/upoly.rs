//! Dense univariate polynomials over the rationals (coefficients low to high).
//!
//! Only the pieces the binary-form code needs: Euclidean division, gcd and
//! exact rational root finding by Sturm isolation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{common_denominator, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            None => UPoly::zero(),
            Some(lc) => {
                let inv = lc.recip();
                UPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Monic greatest common divisor (zero if both inputs vanish).
    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    pub fn squarefree(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = UPoly::gcd(self, &self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// All distinct rational roots, in increasing order.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let sq = self.squarefree();
        let deg = match sq.degree() {
            None | Some(0) => return Vec::new(),
            Some(d) => d,
        };
        if deg == 1 {
            return vec![-&sq.coeffs[0] / &sq.coeffs[1]];
        }
        // Clear denominators: a rational root p/q has q dividing the leading
        // integer coefficient `lead`, so lead*root is an integer.
        let den = common_denominator(sq.coeffs.iter());
        let ints: Vec<Rational> = sq
            .coeffs
            .iter()
            .map(|c| c * Rational::from_integer(den.clone()))
            .collect();
        let lead = ints.last().unwrap().abs();
        let poly = UPoly::new(ints);
        let mut roots = Vec::new();
        for (lo, hi) in poly.isolate_real_roots() {
            let (lo, hi) = poly.refine(lo, hi, &lead.recip());
            let lo_y = (&lo * &lead).floor();
            let hi_y = (&hi * &lead).ceil();
            let mut y = lo_y;
            while y <= hi_y {
                let cand = &y / &lead;
                if cand >= lo && cand <= hi && poly.eval(&cand).is_zero() {
                    roots.push(cand);
                    break;
                }
                y += Rational::one();
            }
        }
        roots.sort();
        roots
    }

    fn sturm_chain(&self) -> Vec<UPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(UPoly::new(r.coeffs.into_iter().map(|c| -c).collect()));
        }
        chain
    }

    fn sign_changes(chain: &[UPoly], x: &Rational) -> usize {
        let signs: Vec<i8> = chain
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|s| *s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Disjoint half-open intervals `(lo, hi]`, each containing exactly one
    /// real root of a squarefree polynomial.
    fn isolate_real_roots(&self) -> Vec<(Rational, Rational)> {
        let lc = self.leading().unwrap().abs();
        let bound = self
            .coeffs
            .iter()
            .map(|c| c.abs() / &lc)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a })
            + Rational::one();
        let chain = self.sturm_chain();
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            let count = Self::sign_changes(&chain, &lo) - Self::sign_changes(&chain, &hi);
            match count {
                0 => {}
                1 => out.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
        out
    }

    /// Shrink an isolating interval `(lo, hi]` below the requested width.
    fn refine(&self, mut lo: Rational, mut hi: Rational, width: &Rational) -> (Rational, Rational) {
        let two = Rational::from_integer(BigInt::from(2));
        if self.eval(&hi).is_zero() {
            return (hi.clone(), hi);
        }
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / &two;
            let vm = self.eval(&mid);
            if vm.is_zero() {
                return (mid.clone(), mid);
            }
            let vh = self.eval(&hi);
            if vm.is_positive() == vh.is_positive() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};

    fn p(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-1)(x+2) and (x-1)(x-3)
        let g = UPoly::gcd(&p(&[-2, 1, 1]), &p(&[3, -4, 1]));
        assert_eq!(g, p(&[-1, 1]));
    }

    #[test]
    fn rational_roots_found_exactly() {
        // (2x-3)(x+5)(x^2+1)(3x)
        let f = p(&[-3, 2]);
        let f = mul(&f, &p(&[5, 1]));
        let f = mul(&f, &p(&[1, 0, 1]));
        let f = mul(&f, &p(&[0, 3]));
        assert_eq!(f.rational_roots(), vec![rat(-5), rat(0), ratio(3, 2)]);
        assert!(p(&[2, 0, -1]).rational_roots().is_empty());
    }

    #[test]
    fn close_roots_are_separated() {
        // (100x - 1)(101x - 1)
        let f = mul(&p(&[-1, 100]), &p(&[-1, 101]));
        assert_eq!(f.rational_roots(), vec![ratio(1, 101), ratio(1, 100)]);
    }

    fn mul(a: &UPoly, b: &UPoly) -> UPoly {
        let mut out = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        UPoly::new(out)
    }
}
