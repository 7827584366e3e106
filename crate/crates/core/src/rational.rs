//! Exact rationals: the `a/b` text form and serde helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_int(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// Parses `a`, `-a` or `a/b` (decimal integers, `b` nonzero).
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let offset = s.len() - s.trim_start().len();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let n = parse_int(num).ok_or_else(|| Error::parse(offset, format!("invalid integer {num:?}")))?;
    let d = match den {
        Some(d) => {
            let pos = offset + t.find('/').unwrap_or(0) + 1;
            parse_int(d).ok_or_else(|| Error::parse(pos, format!("invalid integer {d:?}")))?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::parse(offset, "zero denominator"));
    }
    Ok(Q::new(n, d))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Prints `a` for integers and `a/b` otherwise.
pub fn fmt_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `base^exp` for a possibly negative exponent.
pub fn pow_i64(base: &Q, exp: i64) -> Q {
    let e = exp.unsigned_abs();
    let mut acc = Q::one();
    let mut b = base.clone();
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        k >>= 1;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

pub fn floor(x: &Q) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Serde adapter storing a rational as its `a/b` string.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
