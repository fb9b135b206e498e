//! Exact rational arithmetic helpers.
//!
//! All weights, distances and rounding errors in this crate are
//! `num_rational::BigRational` values, which are always kept in lowest terms
//! by the underlying library. Decimal literals such as `3.6` convert exactly
//! (never through floating point).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational number, the scalar type of the whole crate.
pub type Rational = num_rational::BigRational;

/// Error produced when a rational literal cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    Empty,
    InvalidDigit(String),
    ZeroDenominator,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseRationalError::Empty => write!(f, "empty rational literal"),
            ParseRationalError::InvalidDigit(s) => write!(f, "invalid rational literal '{s}'"),
            ParseRationalError::ZeroDenominator => write!(f, "denominator is zero"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParseRationalError {}

fn parse_bigint(s: &str) -> Result<BigInt, ParseRationalError> {
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    s.parse::<BigInt>()
        .map_err(|_| ParseRationalError::InvalidDigit(s.to_string()))
}

/// Parses a rational literal: an integer (`7`), a fraction (`5/2`, `-1/3`),
/// or a decimal (`3.6`, `-0.25`). Decimals are converted exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let den = parse_bigint(den)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator);
        }
        return Ok(Rational::new(parse_bigint(num)?, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || frac_part.contains(['+', '-']) {
            return Err(ParseRationalError::InvalidDigit(s.to_string()));
        }
        let negative = int_part.starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            BigInt::zero()
        } else {
            parse_bigint(int_part)?
        };
        let scale = num_traits::pow(BigInt::from(10u32), frac_part.len());
        let frac = parse_bigint(frac_part)?;
        if frac.is_negative() {
            return Err(ParseRationalError::InvalidDigit(s.to_string()));
        }
        let unsigned = int_part.abs() * &scale + frac;
        let signed = if negative { -unsigned } else { unsigned };
        return Ok(Rational::new(signed, scale));
    }
    Ok(Rational::from_integer(parse_bigint(s)?))
}

/// Formats a rational in lowest terms: `p/q`, or just `p` when `q == 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let mut s = r.numer().to_string();
        s.push('/');
        s.push_str(&r.denom().to_string());
        s
    }
}

/// Floor of a rational as a big integer.
pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// Fractional part `r - floor(r)`, always in `[0, 1)`.
pub fn frac_part(r: &Rational) -> Rational {
    r - r.floor()
}

/// Least common multiple of the denominators of the given rationals.
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> BigInt {
    let mut acc = BigInt::one();
    for v in values {
        acc = num_integer::lcm(acc, v.denom().clone());
    }
    acc
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Scales rationals to a common integer grid: `scaled[i] = values[i] * lcm`.
/// Returns the scale factor together with the scaled integers.
pub fn scale_to_integers(values: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let lcm = denominator_lcm(values.iter());
    let scaled = values
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    (lcm, scaled)
}
