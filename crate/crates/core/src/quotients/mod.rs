//! Finite quotients of finitely presented groups: enumeration, the image
//! group, its regular representation and the kernel data needed downstream.

mod cache;
mod enumerate;
mod group;

pub use cache::enumerate_cached;
pub use enumerate::{enumerate_quotients, Enumeration, EnumerationOptions};
pub use group::{FiniteQuotient, QuotientDescriptor};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("expected {expected} permutations, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("generator images must be permutations of one common degree")]
    InvalidPermutation,
    #[error("relator {0} does not act trivially")]
    RelatorNotTrivial(usize),
    #[error("generator images do not act transitively")]
    NotTransitive,
    #[error("internal error: {0}")]
    Internal(String),
}
