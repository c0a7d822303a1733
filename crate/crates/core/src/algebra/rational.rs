//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`, which already keeps values in
//! lowest terms with a positive denominator. This module adds the textual
//! `"p/q"` encoding used by the data files and a few integer helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use num_rational::BigRational as Rational;

use super::AlgebraError;

/// Parse `"p/q"`, `"p"` or a decimal-free signed integer.
pub fn parse_rational(text: &str) -> Result<Rational, AlgebraError> {
    let trimmed = text.trim();
    let parsed = match trimmed.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad(trimmed))?;
            let den: BigInt = den.trim().parse().map_err(|_| bad(trimmed))?;
            if den.is_zero() {
                return Err(AlgebraError::Parse(format!("zero denominator in '{trimmed}'")));
            }
            Rational::new(num, den)
        }
        None => Rational::from_integer(trimmed.parse().map_err(|_| bad(trimmed))?),
    };
    Ok(parsed)
}

fn bad(text: &str) -> AlgebraError {
    AlgebraError::Parse(format!("not a rational number: '{text}'"))
}

/// `"p/q"` or `"p"`; the inverse of [`parse_rational`].
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scale a rational vector to a primitive integer vector with positive first
/// nonzero entry. Returns the integer vector and the scale factor used.
pub fn primitive_integer_vector(values: &[Rational]) -> (Vec<BigInt>, Rational) {
    let den = common_denominator(values.iter());
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| (v * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let mut content = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if content.is_zero() {
        return (ints, Rational::one());
    }
    if ints.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
        content = -content;
    }
    let ints = ints.into_iter().map(|v| v / &content).collect();
    (ints, Rational::new(den, content))
}

/// Serde adapter for a single rational stored as a string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        format_rational(value).serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let raw = RationalRepr::deserialize(deserializer)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of rationals stored as strings.
pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = values.iter().map(format_rational).collect();
        strings.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<RationalRepr>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|r| r.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Rationals may be written as strings or as plain JSON integers.
#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Text(String),
    Int(i64),
}

impl RationalRepr {
    fn into_rational(self) -> Result<Rational, AlgebraError> {
        match self {
            RationalRepr::Text(s) => parse_rational(&s),
            RationalRepr::Int(i) => Ok(rat(i)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for text in ["0", "-3", "12/5", "-4/75", "6/4"] {
            let v = parse_rational(text).unwrap();
            let back = parse_rational(&format_rational(&v)).unwrap();
            assert_eq!(v, back);
        }
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&parse_rational("-8/-2").unwrap()), "4");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn primitive_vector_is_normalized() {
        let (ints, scale) = primitive_integer_vector(&[ratio(-1, 2), ratio(3, 4), rat(0)]);
        let expected: Vec<BigInt> = [2, -3, 0].into_iter().map(BigInt::from).collect();
        assert_eq!(ints, expected);
        assert_eq!(scale, rat(-4));
    }
}
