//! Arbitrary-precision rational scalars.
//!
//! `Rat` is `num::BigRational`, which already maintains the invariants the
//! coefficient ring needs: always reduced to lowest terms, denominator
//! positive, canonical zero `0/1`. This module adds the conversions the rest
//! of the crate leans on: exact factorials and binomials, correctly rounded
//! `f64` conversion for arbitrarily large numerators, and the `p/q` string
//! form used by the JSON schemas.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// (2k-1)!! with (-1)!! = 1.
pub fn double_factorial_odd(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    let mut j: i64 = 2 * k as i64 - 1;
    while j >= 3 {
        acc *= BigInt::from(j);
        j -= 2;
    }
    acc
}

/// (2k)!! = 2^k k!.
pub fn double_factorial_even(k: usize) -> BigInt {
    factorial(k) << k
}

/// Parse "p", "-p", or "p/q" with q > 0 after normalisation.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| Error::Parse(format!("bad integer '{num}'")))?;
    let d: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad integer '{den}'")))?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rat::new(n, d))
}

/// Render as "p" or "p/q".
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Convert to f64 with one correctly positioned rounding step even when the
/// numerator and denominator individually overflow f64 range.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    // Scale so the integer quotient holds ~80 significand bits, convert the
    // quotient once, then undo the scaling with exact powers of two.
    let shift: i64 = 80 - (num.bits() as i64 - den.bits() as i64);
    let q = if shift >= 0 { (num << shift as u64) / den } else { num / (den << (-shift) as u64) };
    let mag = q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-shift as i32);
    if neg {
        -mag
    } else {
        mag
    }
}

/// Round a rational to `bits` bits of precision (round half to even), as an
/// exact rational. Used when a caller requests numeric evaluation at a
/// precision below f64's 53 bits.
pub fn round_to_bits(r: &Rat, bits: u32) -> Rat {
    if r.is_zero() || bits >= 53 {
        return r.clone();
    }
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    let exp: i64 = bits as i64 - (num.bits() as i64 - den.bits() as i64);
    // q ~ |r| * 2^exp with bits..bits+1 significant bits
    let (scaled_num, scaled_den) =
        if exp >= 0 { (num << exp as u64, den) } else { (num, den << (-exp) as u64) };
    let twice = (&scaled_num << 1u32) / &scaled_den;
    let mut q = &twice >> 1u32;
    let rem_ge_half = (&twice & BigInt::one()) == BigInt::one();
    if rem_ge_half {
        // break ties to even; above-half always rounds up
        let exact_half = (&q << 1u32 | BigInt::one()) * &scaled_den == (&scaled_num << 1u32);
        if !exact_half || (&q & BigInt::one()) == BigInt::one() {
            q += 1;
        }
    }
    let mut out = Rat::new(q, BigInt::one());
    if exp >= 0 {
        out /= Rat::from_integer(BigInt::one() << exp as u64);
    } else {
        out *= Rat::from_integer(BigInt::one() << (-exp) as u64);
    }
    if neg {
        -out
    } else {
        out
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Sign-aware exponentiation of a rational by a possibly negative power.
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num::pow::pow(base.clone(), exp as usize)
    } else {
        num::pow::pow(base.clone(), (-exp) as usize).recip()
    }
}
