//! Exact rational arithmetic helpers shared by the tree, the solvers and the
//! report writers.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number used for every payoff and probability.
pub type Rational = BigRational;

/// Number type the evaluators are generic over: exact rationals for
/// certification, `f64` for the iterative solver.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// `n / d` as a rational. Panics on a zero denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"1/3"`, `"-2"`, `"0.89"` or `".5"` into an exact rational.
///
/// Decimals are taken at their literal expansion, so `"0.1"` is exactly
/// `1/10`.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if s.contains('/') {
        let r = Rational::from_str(s).map_err(|_| bad())?;
        return Ok(r);
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(numer, denom);
    Ok(if negative { -r } else { r })
}

/// Renders `r` like C's `%.{sig}g`, rounding the exact value half-to-even.
pub fn format_decimal(r: &Rational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let mag = r.abs();

    // exponent e with 10^e <= mag < 10^(e+1)
    let ten = Rational::from_integer(BigInt::from(10));
    let mut e: i64 = 0;
    let mut scaled = mag.clone();
    while scaled >= ten {
        scaled = scaled / &ten;
        e += 1;
    }
    while scaled < Rational::one() {
        scaled = scaled * &ten;
        e -= 1;
    }

    let shift = sig as i64 - 1 - e;
    let factor = pow10(shift);
    let mut digits = round_half_even(&(mag * factor));
    if digits == num_traits::pow(BigInt::from(10), sig) {
        digits /= 10;
        e += 1;
    }
    let mut text = digits.to_string();
    debug_assert_eq!(text.len(), sig);

    let body = if e < -4 || e >= sig as i64 {
        let (lead, rest) = text.split_at(1);
        let rest = rest.trim_end_matches('0');
        let mantissa = if rest.is_empty() { lead.to_string() } else { format!("{lead}.{rest}") };
        let sign = if e < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", e.abs())
    } else if e >= 0 {
        let point = (e + 1) as usize;
        let frac = text.split_off(point);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() { text } else { format!("{text}.{frac}") }
    } else {
        let zeros = "0".repeat((-e - 1) as usize);
        let frac = format!("{zeros}{text}");
        format!("0.{}", frac.trim_end_matches('0'))
    };
    if negative { format!("-{body}") } else { body }
}

fn pow10(exp: i64) -> Rational {
    let p = num_traits::pow(BigInt::from(10), exp.unsigned_abs() as usize);
    if exp >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

fn round_half_even(x: &Rational) -> BigInt {
    let floor = x.floor().to_integer();
    let rem = x - Rational::from_integer(floor.clone());
    let half = ratio(1, 2);
    if rem > half || (rem == half && floor.is_odd()) {
        floor + 1
    } else {
        floor
    }
}

/// Exact `n / d` string without a denominator for integers (`"-1/18"`, `"0"`).
pub fn exact_string(r: &Rational) -> String {
    r.to_string()
}
