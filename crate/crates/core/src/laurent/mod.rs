//! Exact arithmetic over ℤ[t^±1] and dense matrices of Laurent polynomials.

mod dense;
mod matrix;
mod modular;
mod poly;

pub use matrix::LaurentMatrix;
pub use poly::{LaurentPoly, RatLaurentPoly};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("not divisible")]
    NotDivisible,
    #[error("matrix is {0}x{1}, expected square")]
    NonSquare(usize, usize),
    #[error("cannot parse Laurent polynomial {0:?}")]
    Parse(String),
}
