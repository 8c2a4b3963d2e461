//! Continued-fraction expansions of `e^n`, `e^(l/n)`, the lower incomplete gamma
//! function and the confluent hypergeometric function `1F1(1; b+1; z)`.
//!
//! Integer-parameter families are evaluated in exact rational arithmetic; the
//! complex-variable families run over a high-precision complex type with an
//! explicit [`PrecisionContext`]. Independent series and quadrature evaluators in
//! [`oracle`] serve as ground truth, and [`identities`] turns every closed-form
//! claim about the expansions into an executable [`identities::VerificationReport`].

pub mod cf;
pub mod cli;
mod error;
pub mod expansions;
pub mod identities;
pub mod numeric;
pub mod oracle;

pub use error::{Error, Result};
pub use numeric::{BigInt, BigRational, HighPrecComplex, HighPrecReal, PrecisionContext, Scalar};
