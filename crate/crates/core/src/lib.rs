//! Probability that a random block projection `U A^k V` preserves the
//! minimal polynomial of a matrix over a finite field.
//!
//! * [`field`]: prime-field arithmetic, dense matrices, seeded RNG streams.
//! * [`poly`]: polynomials, irreducibility, Berlekamp–Massey.
//! * [`jordan`]: generalized Jordan forms from elementary divisors, applied
//!   as black boxes, and block projections of their power sequences.
//! * [`exactprob`]: exact rational formulas, worst case over all `n x n`
//!   matrices, log-space evaluation for huge `n`.
//! * [`montecarlo`]: simulation and exhaustive enumeration that check the
//!   formulas empirically.

pub mod catalog;
pub mod exactprob;
pub mod field;
pub mod jordan;
pub mod montecarlo;
pub mod poly;

use thiserror::Error;

pub use exactprob::{ExactProb, ProbError};
pub use field::{FieldElement, FieldError, Matrix, PrimeField};
pub use jordan::{BlackBoxMatrix, ElementaryDivisorSpec, PrimaryComponent, SpecError};
pub use montecarlo::{MonteCarloError, TrialReport};
pub use poly::{Poly, PolyError, ScalarSequence};

/// Any domain error raised by the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field: {0}")]
    Field(#[from] FieldError),
    #[error("polynomial: {0}")]
    Poly(#[from] PolyError),
    #[error("spec: {0}")]
    Spec(#[from] SpecError),
    #[error("probability: {0}")]
    Prob(#[from] ProbError),
    #[error("simulation: {0}")]
    MonteCarlo(#[from] MonteCarloError),
}
