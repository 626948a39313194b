//! Exact rational arithmetic: sparse multivariate polynomials, reduced rational
//! functions, factored-denominator fractions, Laurent series and residues.

pub mod factored;
pub mod gcd;
pub mod monomial;
pub mod poly;
pub mod ratfunc;
pub mod serial;
pub mod series;

pub use factored::FactoredFrac;
pub use gcd::{gcd_primitive, poly_gcd};
pub use monomial::Monomial;
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::MultiPoly;
pub use ratfunc::RationalFunc;
pub use serial::{PolyJson, RationalFuncJson};
pub use series::{laurent_at, residue_at, residue_scalar, ExpansionPoint, LaurentSeries, POLE_ORDER_BOUND};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("variable sets differ ({left} vs {right} variables)")]
    VariableMismatch { left: usize, right: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division is not exact")]
    InexactDivision,
    #[error("pole of order {order} exceeds the bound {bound}")]
    PoleOrderExceeded { order: u32, bound: u32 },
    #[error("expression depends on more than the expansion variable")]
    NotUnivariate,
    #[error("unknown variable index {0}")]
    UnknownVariable(usize),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    poly::rat(n)
}

/// `n / d` as a reduced rational.
pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
