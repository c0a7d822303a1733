//! Exact arithmetic substrate: rationals, binary forms, sparse multivariate
//! polynomials and linear algebra over the rationals.

pub mod bform;
pub mod linalg;
pub mod mpoly;
pub mod parse;
pub mod rational;
pub mod series;
pub mod upoly;

use thiserror::Error;

pub use bform::BinaryForm;
pub use linalg::{MatrixQ, SparseEchelon, SparseVec};
pub use mpoly::{MultiPoly, Var};
pub use parse::{parse_in, parse_polynomial};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("not divisible: remainder of degree {remainder_degree}")]
    NotDivisible { remainder_degree: usize },
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("inconsistent binding: {0}")]
    InconsistentBinding(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable sets differ: {0}")]
    VariableMismatch(String),
    #[error("polynomial is not weighted homogeneous")]
    NotHomogeneous,
}
