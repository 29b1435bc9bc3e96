//! Exact rational and integer scalars.

use alloc::string::String;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Exact rational number.
pub type Rat = BigRational;

/// `n` as an [`Int`].
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// `n/d` as a [`Rat`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(int(n), int(d))
}

/// `n` as a [`Rat`].
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(int(n))
}

/// `q` reduced modulo 1 into `[0, 1)`.
pub fn mod_one(q: &Rat) -> Rat {
    q - q.floor()
}

/// Nearest integer to `q`, halves rounding away from zero (symmetric under
/// negation).
pub fn nearest_integer(q: &Rat) -> Int {
    let mag = (q.abs() + rat(1, 2)).floor().to_integer();
    if q.is_negative() {
        -mag
    } else {
        mag
    }
}

/// `base^exp` for a nonzero base and an arbitrary integer exponent.
pub fn rat_pow(base: &Rat, exp: &Int) -> Rat {
    debug_assert!(!base.is_zero(), "zero base in rat_pow");
    if exp.is_zero() || base.is_one() {
        return Rat::one();
    }
    let mag = exp
        .magnitude()
        .to_u64()
        .expect("exponent magnitude exceeds u64");
    let p = num_traits::pow::pow(base.clone(), mag as usize);
    if exp.is_negative() {
        p.recip()
    } else {
        p
    }
}

/// Parse a rational written as `p` or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let body = s.trim();
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (body, "1"),
    };
    let num = Int::from_str(num).map_err(|_| RatParseError::Malformed(String::from(s)))?;
    let den = Int::from_str(den).map_err(|_| RatParseError::Malformed(String::from(s)))?;
    if den.is_zero() {
        return Err(RatParseError::ZeroDenominator(String::from(s)));
    }
    Ok(Rat::new(num, den))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatParseError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}
