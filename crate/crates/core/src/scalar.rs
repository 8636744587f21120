//! Coefficient types for formal power series.
//!
//! Series code is written once against [`Coefficient`] and instantiated with
//! exact rationals (oracle-grade identities) or with `f64`/`f32` (large
//! truncation orders).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field operations plus the conversions the series machinery needs.
pub trait Coefficient:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    /// Whether arithmetic on this type is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    /// Exact conversion for rationals (every finite double is a dyadic
    /// rational); `None` for non-finite input.
    fn from_f64(v: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// `ln |self|`, finite even when `self` lies outside the double range.
    /// Returns `-inf` for zero.
    fn ln_abs(&self) -> f64;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Canonical text form: `p/q` (or `p`) for rationals, the shortest
    /// round-trip decimal for floats.
    fn to_text(&self) -> String;

    fn parse_text(s: &str) -> Result<Self>;

    /// Numerator and denominator strings for CSV output.
    fn to_fraction(&self) -> (String, String);

    fn from_fraction(num: &str, den: &str) -> Result<Self>;
}

fn bigint_ln_abs(v: &BigInt) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().map(|x| x.abs().ln()).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top: BigInt = v.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

impl Coefficient for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }

    fn to_f64(&self) -> f64 {
        match ToPrimitive::to_f64(self) {
            Some(x) if x.is_finite() => x,
            _ => {
                let ln = self.ln_abs();
                let sign = if self.is_negative() { -1.0 } else { 1.0 };
                sign * ln.exp()
            }
        }
    }

    fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        bigint_ln_abs(self.numer()) - bigint_ln_abs(self.denom())
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn to_text(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => Self::from_fraction(n, d),
            None => Self::from_fraction(s, "1"),
        }
    }

    fn to_fraction(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }

    fn from_fraction(num: &str, den: &str) -> Result<Self> {
        let n = BigInt::from_str(num.trim()).map_err(|e| Error::Parse(format!("{num}: {e}")))?;
        let d = BigInt::from_str(den.trim()).map_err(|e| Error::Parse(format!("{den}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(n, d))
    }
}

macro_rules! float_coefficient {
    ($t:ty) => {
        impl Coefficient for $t {
            const EXACT: bool = false;

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn from_rational(r: &BigRational) -> Self {
                <BigRational as Coefficient>::to_f64(r) as $t
            }

            fn from_f64(v: f64) -> Option<Self> {
                v.is_finite().then_some(v as $t)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn ln_abs(&self) -> f64 {
                (*self as f64).abs().ln()
            }

            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }

            fn to_text(&self) -> String {
                format!("{:?}", self)
            }

            fn parse_text(s: &str) -> Result<Self> {
                s.trim()
                    .parse::<$t>()
                    .map_err(|e| Error::Parse(format!("{s}: {e}")))
            }

            fn to_fraction(&self) -> (String, String) {
                (self.to_text(), "1".to_string())
            }

            fn from_fraction(num: &str, den: &str) -> Result<Self> {
                Ok(Self::parse_text(num)? / Self::parse_text(den)?)
            }
        }
    };
}

float_coefficient!(f64);
float_coefficient!(f32);
