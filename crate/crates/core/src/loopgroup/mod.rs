//! Truncated Laurent-series 2x2 matrix algebra over a multivariate
//! rational-function field, with Iwahori membership and coset-equality
//! checks.

mod fixtures;
mod matrix;
mod poly;
mod ratfunc;
mod series;

pub use fixtures::{verify_fixtures, ExactLaurent, FixtureOutcome, LoopFixture};
pub use matrix::{LoopMatrix, MemberStatus, MembershipVerdict, Subgroup};
pub use poly::MultiPoly;
pub use ratfunc::RatFunc;
pub use series::LaurentSeries;

use alloc::string::String;

/// Default working precision in powers of `t`. Verifiers retry once at twice
/// this value when a verdict comes back as insufficient precision.
pub const DEFAULT_PRECISION: i64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoopError {
    #[error("determinant is not 1 to working precision")]
    NonUnitDeterminant,
    #[error("series is zero to working precision and cannot be inverted")]
    ZeroSeries,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("fixture `{0}` is not an SL2 matrix")]
    BadFixture(String),
}
