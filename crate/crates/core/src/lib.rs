//! Loop-equation solver for the product `S2 = X1 X1^† X2^† X2` of two complex
//! Ginibre matrices, with combinatorial and Monte Carlo cross-checks.

pub mod curve;
pub mod eigen;
pub mod golden;
pub mod maps;
pub mod moments;
pub mod montecarlo;
pub mod quadrature;
pub mod solver;

pub use prodloop_algebra as algebra;

use prodloop_algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resolvent ({g},{n}) is not in the table")]
    MissingEntry { g: u32, n: usize },
    #[error("w_({g},{n}) has a denominator factor {factor} outside z = 0, z = -3/2")]
    PoleLocation { g: u32, n: usize, factor: String },
    #[error("coefficient of the unknown vanishes identically")]
    DegenerateCoefficient,
    #[error("search space of {needed} exceeds the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
    #[error("non-integer genus in component (Euler characteristic {0})")]
    NonIntegerGenus(i64),
}
