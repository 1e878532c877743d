//! Reduced nonnegative fractions and the two transforms the sieve is built on:
//! the imbalance `|p - q| / (p + q)` and its Moebius conjugate `(1 - x) / (1 + x)`.
//!
//! A [`Ratio`] is canonicalized when it is built, so derived `Eq`/`Hash` are
//! structural and two equal rational values always land on the same key of a
//! collision index.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RatioError {
    #[error("denominator must be positive, got {0}")]
    NonPositiveDenominator(i64),
    #[error("numerator must be nonnegative, got {0}")]
    NegativeNumerator(i64),
    #[error("imbalance arguments must be positive, got ({0}, {1})")]
    NonPositiveArgument(i64, i64),
    #[error("imbalance arguments must be positive reals, got ({0}, {1})")]
    NonPositiveReal(f64, f64),
    #[error("moebius conjugate is defined on [0, 1), got {0}")]
    OutsideUnitInterval(Ratio),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

/// A nonnegative fraction stored in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: i64,
    den: i64,
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    /// Caller guarantees `gcd(num, den) == 1`, `num >= 0` and `den >= 1`.
    pub(crate) const fn from_reduced(num: i64, den: i64) -> Ratio {
        Ratio { num, den }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact sum, reduced.
    pub fn checked_add(self, other: Ratio) -> Result<Ratio, RatioError> {
        let num = self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128;
        let den = self.den as i128 * other.den as i128;
        let g = num.gcd(&den);
        let num = i64::try_from(num / g).map_err(|_| RatioError::Overflow("ratio addition"))?;
        let den = i64::try_from(den / g).map_err(|_| RatioError::Overflow("ratio addition"))?;
        Ok(Ratio { num, den })
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An ordered pair of positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IntPair {
    pub p: i64,
    pub q: i64,
}

impl IntPair {
    pub fn new(p: i64, q: i64) -> Result<IntPair, RatioError> {
        if p < 1 || q < 1 {
            return Err(RatioError::NonPositiveArgument(p, q));
        }
        Ok(IntPair { p, q })
    }

    pub fn imbalance(&self) -> Result<Ratio, RatioError> {
        imbalance(self.p, self.q)
    }
}

/// Builds `num / den` in lowest terms.
pub fn make_ratio(num: i64, den: i64) -> Result<Ratio, RatioError> {
    if den < 1 {
        return Err(RatioError::NonPositiveDenominator(den));
    }
    if num < 0 {
        return Err(RatioError::NegativeNumerator(num));
    }
    if num == 0 {
        return Ok(Ratio::ZERO);
    }
    let g = num.gcd(&den);
    Ok(Ratio {
        num: num / g,
        den: den / g,
    })
}

/// `|p - q| / (p + q)`, symmetric in its arguments, always in `[0, 1)`.
pub fn imbalance(p: i64, q: i64) -> Result<Ratio, RatioError> {
    if p < 1 || q < 1 {
        return Err(RatioError::NonPositiveArgument(p, q));
    }
    let sum = p
        .checked_add(q)
        .ok_or(RatioError::Overflow("imbalance sum"))?;
    // both positive, so the difference cannot overflow
    make_ratio((p - q).abs(), sum)
}

/// The conjugate `(1 - x) / (1 + x)` on `[0, 1)`.
///
/// This is an involution on `[0, 1)`; the conjugate of `0` is `1/1`, which
/// lies outside the interval and cannot be conjugated again.
pub fn moebius(x: Ratio) -> Result<Ratio, RatioError> {
    if x.num >= x.den {
        return Err(RatioError::OutsideUnitInterval(x));
    }
    // (1 - a/b) / (1 + a/b) with the common factor 1/b cancelled
    let one_minus = x.den - x.num;
    let one_plus = x
        .den
        .checked_add(x.num)
        .ok_or(RatioError::Overflow("moebius conjugate"))?;
    make_ratio(one_minus, one_plus)
}

/// Floating-point imbalance of two positive reals.
pub fn imbalance_float(x: f64, y: f64) -> Result<f64, RatioError> {
    if !(x > 0.0 && y > 0.0) {
        return Err(RatioError::NonPositiveReal(x, y));
    }
    Ok((x - y).abs() / (x + y))
}
