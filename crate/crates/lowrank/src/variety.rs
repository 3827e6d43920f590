//! Closed-form calculators for determinantal-variety dimension, degree and
//! parity, the minimal-measurement bounds, and the tightness
//! classification of those bounds.

use num_traits::{One, Signed};
use thiserror::Error;

use crate::exactnum::{factorial, p2_valuation, BigInt, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    General,
    Symmetric,
    WeakRecovery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemSpec {
    pub n: u32,
    pub r: u32,
    pub variant: Variant,
    pub field: Field,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VarietyError {
    #[error("rank bound r={r} out of range for n={n}")]
    RankOutOfRange { n: u32, r: u32 },
    #[error("injectivity variants require 1 <= r <= n/2, got n={n}, r={r}")]
    InvalidSpec { n: u32, r: u32 },
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<(), VarietyError> {
        let ok = match self.variant {
            Variant::General | Variant::Symmetric => self.r >= 1 && 2 * self.r <= self.n,
            Variant::WeakRecovery => self.r >= 1 && self.r <= self.n,
        };
        if ok {
            Ok(())
        } else {
            Err(VarietyError::InvalidSpec {
                n: self.n,
                r: self.r,
            })
        }
    }
}

fn binom2(k: u32) -> i64 {
    let k = i64::from(k);
    k * (k - 1) / 2
}

/// Affine dimension of the rank <= r locus: 2nr - r^2 for general
/// matrices, C(n+1,2) - C(n-r+1,2) for symmetric ones. r = 0 is allowed
/// for formula testing (dimension 0).
pub fn dim_lowrank(n: u32, r: u32, variant: Variant) -> Result<i64, VarietyError> {
    if r > n {
        return Err(VarietyError::RankOutOfRange { n, r });
    }
    let (n_i, r_i) = (i64::from(n), i64::from(r));
    Ok(match variant {
        Variant::General | Variant::WeakRecovery => 2 * n_i * r_i - r_i * r_i,
        Variant::Symmetric => binom2(n + 1) - binom2(n - r + 1),
    })
}

/// Degree of the rank <= r determinantal variety:
/// d_{n,r} = prod_{i=0}^{n-r-1} (n+i)! i! / ((r+i)! (n-r+i)!), an exact
/// integer; non-integrality would indicate a broken formula.
pub fn degree_determinantal(n: u32, r: u32) -> Result<BigInt, VarietyError> {
    if r > n {
        return Err(VarietyError::RankOutOfRange { n, r });
    }
    let mut acc = Rational::one();
    for i in 0..(n - r) {
        let num = factorial(u64::from(n + i)) * factorial(u64::from(i));
        let den = factorial(u64::from(r + i)) * factorial(u64::from(n - r + i));
        acc *= Rational::new(num, den);
    }
    assert!(
        acc.denom().is_one(),
        "determinantal degree product must be an integer"
    );
    assert!(acc.numer().is_positive());
    Ok(acc.numer().clone())
}

/// Whether d_{n,r2} is odd, i.e. its 2-adic valuation vanishes.
pub fn is_odd_degree(n: u32, r2: u32) -> Result<bool, VarietyError> {
    let d = degree_determinantal(n, r2)?;
    Ok(p2_valuation(&d).expect("degree is positive") == 0)
}

/// The sufficient measurement count: general 4nr - 4r^2, symmetric
/// 2nr + r - 2r^2, weak recovery 2nr - r^2 + 1.
pub fn min_measurement_bound(spec: &ProblemSpec) -> Result<i64, VarietyError> {
    spec.validate()?;
    let (n, r) = (i64::from(spec.n), i64::from(spec.r));
    Ok(match spec.variant {
        Variant::General => 4 * n * r - 4 * r * r,
        Variant::Symmetric => 2 * n * r + r - 2 * r * r,
        Variant::WeakRecovery => 2 * n * r - r * r + 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Tightness {
    TightByTheorem,
    KnownNotTight,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TightnessVerdict {
    pub value: Tightness,
    pub citation: String,
}

fn is_power_of_two_at_least_2(x: u32) -> bool {
    x >= 2 && x.is_power_of_two()
}

/// Classification of whether the sufficient bound is also necessary.
/// Only proved cases are asserted; everything else is Unknown.
pub fn tightness_classify(spec: &ProblemSpec) -> Result<TightnessVerdict, VarietyError> {
    spec.validate()?;
    let verdict = |value, citation: &str| TightnessVerdict {
        value,
        citation: citation.to_string(),
    };
    let n_minus_r_pow2 = is_power_of_two_at_least_2(spec.n - spec.r);
    Ok(match (spec.field, spec.variant) {
        (Field::Complex, Variant::General) => verdict(
            Tightness::TightByTheorem,
            "over C, fewer than 4nr-4r^2 measurements always leave a nonzero rank-2r kernel element",
        ),
        (Field::Real, Variant::General) => {
            if (spec.n, spec.r) == (4, 1) {
                verdict(
                    Tightness::KnownNotTight,
                    "explicit 11-matrix ensemble (m = 4n-5) certified injective on rank-1 4x4 matrices",
                )
            } else if n_minus_r_pow2 || spec.n == 2 * spec.r + 1 {
                verdict(
                    Tightness::TightByTheorem,
                    "d_{n,2r} is odd for n = 2^k+r or n = 2r+1, so any linear slice of the rank-2r variety meets a real point",
                )
            } else {
                verdict(Tightness::Unknown, "")
            }
        }
        (Field::Real, Variant::Symmetric) => {
            if (spec.n, spec.r) == (4, 1) {
                verdict(
                    Tightness::KnownNotTight,
                    "explicit 6-projection ensemble (m = 2n-2) certified injective on symmetric rank-1 4x4 matrices",
                )
            } else if n_minus_r_pow2 {
                verdict(
                    Tightness::TightByTheorem,
                    "d_{n,2r} odd for n = 2^k+r carries over to the symmetric rank-2r variety",
                )
            } else {
                verdict(Tightness::Unknown, "")
            }
        }
        _ => verdict(Tightness::Unknown, ""),
    })
}

/// One row of the bounds table exposed by the CLI.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundsRow {
    pub n: u32,
    pub r: u32,
    pub variant: Variant,
    pub field: Field,
    pub dim: i64,
    pub degree: String,
    pub degree_odd: bool,
    pub bound: i64,
    pub tightness: Tightness,
    pub citation: String,
}

pub fn bounds_row(spec: &ProblemSpec) -> Result<BoundsRow, VarietyError> {
    spec.validate()?;
    let dim = dim_lowrank(spec.n, spec.r, spec.variant)?;
    let degree = degree_determinantal(spec.n, spec.r)?;
    let odd = is_odd_degree(spec.n, spec.r)?;
    let bound = min_measurement_bound(spec)?;
    let t = tightness_classify(spec)?;
    Ok(BoundsRow {
        n: spec.n,
        r: spec.r,
        variant: spec.variant,
        field: spec.field,
        dim,
        degree: degree.to_string(),
        degree_odd: odd,
        bound,
        tightness: t.value,
        citation: t.citation,
    })
}
