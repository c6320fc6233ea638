//! Exact probabilities and decimal rendering of rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::combinatorics::BigCount;

/// A randomization probability held as an exact fraction.
///
/// The denominator is normally `C(n, m)`, the number of equally likely
/// assignments. The fraction is not reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactProbability {
    numerator: BigCount,
    denominator: BigCount,
}

impl ExactProbability {
    /// Panics unless `0 <= numerator <= denominator` and `denominator > 0`.
    pub fn new(numerator: BigCount, denominator: BigCount) -> Self {
        assert!(denominator > 0, "probability denominator must be positive");
        assert!(
            numerator <= denominator,
            "probability {numerator}/{denominator} exceeds 1"
        );
        Self {
            numerator,
            denominator,
        }
    }

    pub fn numerator(&self) -> BigCount {
        self.numerator
    }

    pub fn denominator(&self) -> BigCount {
        self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numerator), BigInt::from(self.denominator))
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl Ord for ExactProbability {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.denominator == other.denominator {
            return self.numerator.cmp(&other.numerator);
        }
        match (
            self.numerator.checked_mul(other.denominator),
            other.numerator.checked_mul(self.denominator),
        ) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => (BigUint::from(self.numerator) * BigUint::from(other.denominator))
                .cmp(&(BigUint::from(other.numerator) * BigUint::from(self.denominator))),
        }
    }
}

impl PartialOrd for ExactProbability {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Renders `value` with exactly `digits` fractional digits, rounding half to even.
pub fn format_decimal(value: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = value.abs() * BigRational::from_integer(scale.clone());
    let (mut q, r) = scaled.numer().div_rem(scaled.denom());
    let twice: BigInt = &r * 2;
    match twice.cmp(scaled.denom()) {
        Ordering::Greater => q += 1,
        Ordering::Equal if q.is_odd() => q += 1,
        _ => {}
    }
    let negative = value.is_negative() && !q.is_zero();
    let mut digits_str = q.to_string();
    if digits > 0 {
        let width = digits as usize + 1;
        if digits_str.len() < width {
            digits_str = format!("{}{}", "0".repeat(width - digits_str.len()), digits_str);
        }
        digits_str.insert(digits_str.len() - digits as usize, '.');
    }
    if negative {
        format!("-{digits_str}")
    } else {
        digits_str
    }
}
