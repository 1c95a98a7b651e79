//! Rational scalars and their string form.
//!
//! Every coordinate and coefficient in the crate is a [`Rational`], an
//! arbitrary-precision fraction kept in lowest terms with a positive
//! denominator. On every JSON/CSV surface a rational is written as `"p/q"`,
//! or `"p"` when `q = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`, reduced. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn two_pow_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `"p/q"`, `"p"`, or a plain decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let w: BigInt = match whole {
            "" | "-" | "+" => BigInt::zero(),
            _ => whole.parse().map_err(|_| bad())?,
        };
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(w.abs() * &scale + f, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Parses a JSON value that is either a rational string or an integer number.
pub fn rational_from_json(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(int(i)),
            None => Err(Error::Parse(format!(
                "non-integer JSON number {n}; write rationals as strings"
            ))),
        },
        other => Err(Error::Parse(format!("expected rational, found {other}"))),
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Largest integer `s` with `s*s <= n` for `n >= 0`.
pub fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// The exact square root of `r` when `r` is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = isqrt(n);
    let sd = isqrt(d);
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

/// Rational bounds `lo <= sqrt(r) <= hi` with `hi - lo <= 2^-bits`.
pub fn sqrt_bounds(r: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!r.is_negative(), "sqrt of negative rational");
    if let Some(s) = rational_sqrt(r) {
        return (s.clone(), s);
    }
    // floor(sqrt(r * 4^bits)) / 2^bits, computed on integers.
    let scale = BigInt::one() << (2 * bits);
    let scaled = (r.numer() * scale).div_floor(r.denom());
    let s = isqrt(&scaled);
    let den = BigInt::one() << bits;
    let lo = Rational::new(s.clone(), den.clone());
    let hi = Rational::new(s + 1, den);
    (lo, hi)
}

pub fn binomial2(k: usize) -> u64 {
    let k = k as u64;
    k * k.saturating_sub(1) / 2
}
