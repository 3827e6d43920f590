//! Exact big-integer and rational arithmetic plus the number-theoretic
//! helpers used by the degree and parity formulas.
//!
//! `BigInt` and `Rational` are backed by the `num` stack: `num-rational`
//! keeps every value in lowest terms with a positive denominator, which is
//! exactly the canonical form term merging relies on.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use num_bigint::BigInt;
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumError {
    #[error("p2_valuation requires a positive argument, got {0}")]
    NonPositive(BigInt),
    #[error("malformed number `{0}`")]
    Parse(String),
}

/// n! by repeated multiplication; exact for any n.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Largest k with 2^k dividing n. Rejects n <= 0.
pub fn p2_valuation(n: &BigInt) -> Result<u64, NumError> {
    if !n.is_positive() {
        return Err(NumError::NonPositive(n.clone()));
    }
    // trailing_zeros is exact on the magnitude
    Ok(n.trailing_zeros().expect("positive value has a bit set"))
}

/// Nonnegative gcd with gcd(0,0) = 0.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::gcd(a, b)
}

/// Parse "-123" or "7/33" into a Rational (normalized on construction).
pub fn parse_rational(s: &str) -> Result<Rational, NumError> {
    let s = s.trim();
    let bad = || NumError::Parse(s.to_string());
    match s.split_once('/') {
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().map_err(|_| bad())?;
            let d: BigInt = den.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// "p" when the denominator is 1, "p/q" otherwise; round-trips through
/// `parse_rational` bit-exactly.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
