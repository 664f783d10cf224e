//! Exact arithmetic: prime and extension fields, sparse polynomials,
//! truncated nilpotent algebras and power series.

mod field;
mod gf;
mod poly;
mod series;
mod trunc;
pub mod upoly;

pub use field::{is_prime, Field, FpElt, PrimeField};
pub use gf::{projective_points, Embedding, Gf, ProjectivePoints, MAX_EXT_ORDER};
pub use poly::{Exponents, MultiPoly};
pub use series::{PowerSeries, Valuation, DEFAULT_PRECISION};
pub use trunc::{TruncElt, TruncatedAlgebra};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("operands live in different truncated algebras")]
    AlgebraMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
