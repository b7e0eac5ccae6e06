//! Scalar abstractions.
//!
//! Two families are used throughout the crate:
//!
//! * [`Coeff`] is what a polynomial coefficient must support. It is
//!   implemented for `f32`, `f64` and the exact [`BigRational`], so the
//!   polynomial algebra can run exactly when the input is rational.
//! * [`Real`] is a floating point scalar used by every numerical routine
//!   (quadrature, cutoffs, Taylor data). It is implemented for `f32` and `f64`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Coefficient ring for [`crate::poly::BivarPoly`].
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// The integer `n` embedded in the ring.
    fn from_count(n: u64) -> Self;

    /// Parse a decimal literal such as `3`, `-0.25`, `1e-3` or `2/3`.
    ///
    /// Exact types parse exactly; floating types round to nearest.
    fn parse_literal(text: &str) -> Option<Self>;

    /// Nearest `f64`.
    fn as_f64(&self) -> f64;

    /// Absolute value as an `f64`, used by norm bounds.
    fn abs_f64(&self) -> f64 {
        self.as_f64().abs()
    }

    /// Literal text accepted back by [`Coeff::parse_literal`].
    fn to_literal(&self) -> String;
}

macro_rules! float_coeff {
    ($t:ty) => {
        impl Coeff for $t {
            fn from_count(n: u64) -> Self {
                n as $t
            }

            fn parse_literal(text: &str) -> Option<Self> {
                if let Some((num, den)) = text.split_once('/') {
                    let num = num.trim().parse::<$t>().ok()?;
                    let den = den.trim().parse::<$t>().ok()?;
                    return (den != 0.0).then(|| num / den);
                }
                text.trim().parse::<$t>().ok().filter(|v| v.is_finite())
            }

            fn as_f64(&self) -> f64 {
                *self as f64
            }

            fn to_literal(&self) -> String {
                format!("{}", self)
            }
        }
    };
}

float_coeff!(f32);
float_coeff!(f64);

impl Coeff for BigRational {
    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn parse_literal(text: &str) -> Option<Self> {
        if let Some((num, den)) = text.split_once('/') {
            let num = parse_decimal_exact(num.trim())?;
            let den = parse_decimal_exact(den.trim())?;
            return (!den.is_zero()).then(|| num / den);
        }
        parse_decimal_exact(text.trim())
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn to_literal(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Exact value of a decimal literal `[-+]digits[.digits][e[-+]digits]`.
fn parse_decimal_exact(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if negative { -value } else { value })
}

/// Floating point scalar for the numerical routines.
pub trait Real:
    Float + FloatConst + FromPrimitive + Coeff + fmt::Display + fmt::LowerExp + Sum + Default
{
    /// Convert an `f64` constant.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 constant representable")
    }

    /// Convert a count.
    #[inline]
    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_decimal_literals() {
        let q = BigRational::parse_literal("0.01").unwrap();
        assert_eq!(q, BigRational::new(1.into(), 100.into()));
        let q = BigRational::parse_literal("-2.5e2").unwrap();
        assert_eq!(q, BigRational::from_integer((-250).into()));
        let q = BigRational::parse_literal("1e-3").unwrap();
        assert_eq!(q, BigRational::new(1.into(), 1000.into()));
        let q = BigRational::parse_literal("2/3").unwrap();
        assert_eq!(q, BigRational::new(2.into(), 3.into()));
        assert!(BigRational::parse_literal("1/0").is_none());
        assert!(BigRational::parse_literal("x").is_none());
        assert!(BigRational::parse_literal(".").is_none());
    }

    #[test]
    fn float_literals_round_trip() {
        for v in [0.1_f64, -3.0, 1e-300, 12345.678] {
            assert_eq!(f64::parse_literal(&v.to_literal()), Some(v));
        }
        assert_eq!(f64::parse_literal("1/4"), Some(0.25));
        assert!(f64::parse_literal("inf").is_none());
    }

    #[test]
    fn rational_literal_round_trip() {
        let q = BigRational::new(7.into(), (-12).into());
        assert_eq!(BigRational::parse_literal(&q.to_literal()), Some(q));
    }
}
