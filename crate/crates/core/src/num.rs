//! Exact rationals and their extension by `+∞`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::FlowError;

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `7`, `-3/4` or a decimal such as `1.25`.
pub fn parse_rational(text: &str) -> Result<Rational, FlowError> {
    let bad = || FlowError::InvalidArgument(format!("malformed rational `{text}`"));
    let text = text.trim();
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((numer, denom)) = text.split_once('/') {
        let numer = BigInt::from_str(numer).map_err(|_| bad())?;
        let denom = BigInt::from_str(denom).map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(numer, denom));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let whole = if digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(digits).map_err(|_| bad())?
        };
        let frac = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = Rational::new(whole * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(text)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Smallest integer `j` with `2^j >= x`, for `x > 0`.
pub fn ceil_log2(x: &Rational) -> i64 {
    assert!(x.is_positive(), "ceil_log2 of a non-positive value");
    let two = int(2);
    let mut j = 0i64;
    let mut power = Rational::one();
    if &power >= x {
        // shrink while 2^(j-1) still covers x
        loop {
            let half = &power / &two;
            if &half >= x {
                power = half;
                j -= 1;
            } else {
                return j;
            }
        }
    }
    while &power < x {
        power *= &two;
        j += 1;
    }
    j
}

/// Largest integer `j` with `2^j <= x`, for `x > 0`.
pub fn floor_log2(x: &Rational) -> i64 {
    let j = ceil_log2(x);
    if pow2(j) == *x {
        j
    } else {
        j - 1
    }
}

pub fn pow2(exp: i64) -> Rational {
    let magnitude = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        Rational::from_integer(magnitude)
    } else {
        Rational::new(BigInt::one(), magnitude)
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// A rational or `+∞`. Orders every finite value below infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn zero() -> Self {
        ExtRational::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(v) => Some(v),
            ExtRational::Infinity => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ExtRational::Finite(v) => v.is_positive(),
            ExtRational::Infinity => true,
        }
    }

    /// `self − x`; infinity absorbs the subtraction.
    pub fn minus(&self, x: &Rational) -> ExtRational {
        match self {
            ExtRational::Finite(v) => ExtRational::Finite(v - x),
            ExtRational::Infinity => ExtRational::Infinity,
        }
    }

    pub fn plus(&self, x: &Rational) -> ExtRational {
        match self {
            ExtRational::Finite(v) => ExtRational::Finite(v + x),
            ExtRational::Infinity => ExtRational::Infinity,
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(v: Rational) -> Self {
        ExtRational::Finite(v)
    }
}

impl Add for &ExtRational {
    type Output = ExtRational;

    fn add(self, rhs: &ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }
}

impl PartialEq<Rational> for ExtRational {
    fn eq(&self, other: &Rational) -> bool {
        matches!(self, ExtRational::Finite(v) if v == other)
    }
}

impl PartialOrd<Rational> for ExtRational {
    fn partial_cmp(&self, other: &Rational) -> Option<std::cmp::Ordering> {
        Some(match self {
            ExtRational::Finite(v) => v.cmp(other),
            ExtRational::Infinity => std::cmp::Ordering::Greater,
        })
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(v) => write!(f, "{v}"),
            ExtRational::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRational {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "infinity" => Ok(ExtRational::Infinity),
            other => parse_rational(other).map(ExtRational::Finite),
        }
    }
}

pub fn is_integral(v: &Rational) -> bool {
    v.is_integer()
}
