//! Numeric types usable as belief masses.
//!
//! Every algorithm in this crate is written against [`Scalar`], so the same
//! code runs over `f64`, `f32`, or exact rationals ([`num_rational::Rational64`]).
//! The tolerances below are per type: floats get slack proportional to their
//! precision, rationals are compared exactly.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Num + Signed + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Allowed deviation of a mass total from one.
    fn norm_tolerance() -> Self;

    /// Smallest admissible normalization denominator `1 - lambda * K`.
    fn conflict_guard() -> Self;

    /// Remainders whose magnitude is at or below this are treated as zero.
    fn rounding_slack() -> Self;

    fn from_f64_lossy(value: f64) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(self) -> bool;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn norm_tolerance() -> Self {
        1e-9
    }

    fn conflict_guard() -> Self {
        1e-12
    }

    fn rounding_slack() -> Self {
        1e-15
    }

    fn from_f64_lossy(value: f64) -> Self {
        value
    }

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn norm_tolerance() -> Self {
        1e-5
    }

    fn conflict_guard() -> Self {
        1e-6
    }

    fn rounding_slack() -> Self {
        1e-6
    }

    fn from_f64_lossy(value: f64) -> Self {
        value as f32
    }

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Rational64 {
    fn norm_tolerance() -> Self {
        Rational64::from_integer(0)
    }

    fn conflict_guard() -> Self {
        Rational64::from_integer(0)
    }

    fn rounding_slack() -> Self {
        Rational64::from_integer(0)
    }

    /// Best rational approximation with `i64` parts; non-finite input maps to zero.
    fn from_f64_lossy(value: f64) -> Self {
        Rational64::from_f64(value).unwrap_or_else(|| Rational64::from_integer(0))
    }

    fn is_finite_value(self) -> bool {
        true
    }
}
