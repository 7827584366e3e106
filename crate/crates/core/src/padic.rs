//! Exact p-adic valuations, norms and finite digit expansions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, pow_i64, q, Q};

/// A prime number, checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Prime::new(p).map_err(serde::de::Error::custom)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases cover all of `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `ord_p(x)`: an exact rational, or `+∞` for zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PAdicValuation {
    Finite(Q),
    Infinite,
}

impl PAdicValuation {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            PAdicValuation::Finite(v) => Some(v),
            PAdicValuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PAdicValuation::Infinite)
    }
}

impl From<i64> for PAdicValuation {
    fn from(v: i64) -> Self {
        PAdicValuation::Finite(q(v))
    }
}

impl PartialOrd for PAdicValuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PAdicValuation {
    fn cmp(&self, other: &Self) -> Ordering {
        use PAdicValuation::*;
        match (self, other) {
            (Infinite, Infinite) => Ordering::Equal,
            (Infinite, Finite(_)) => Ordering::Greater,
            (Finite(_), Infinite) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for PAdicValuation {
    type Output = PAdicValuation;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (PAdicValuation::Finite(a), PAdicValuation::Finite(b)) => PAdicValuation::Finite(a + b),
            _ => PAdicValuation::Infinite,
        }
    }
}

impl fmt::Display for PAdicValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PAdicValuation::Finite(v) => f.write_str(&fmt_rational(v)),
            PAdicValuation::Infinite => f.write_str("+inf"),
        }
    }
}

/// Largest `s` with `p^s | n`, or `None` for `n = 0`.
pub fn ord_int_u64(n: &BigInt, p: Prime) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let pb = p.to_bigint();
    let mut m = n.abs();
    let mut s = 0u64;
    loop {
        let (quot, rem) = m.div_rem(&pb);
        if !rem.is_zero() {
            return Some(s);
        }
        m = quot;
        s += 1;
    }
}

pub fn ord_int(n: &BigInt, p: Prime) -> PAdicValuation {
    match ord_int_u64(n, p) {
        Some(s) => PAdicValuation::Finite(q(s as i64)),
        None => PAdicValuation::Infinite,
    }
}

/// `ord_p` of a rational as a plain integer; `None` for zero.
pub fn ord_rat_i64(x: &Q, p: Prime) -> Option<i64> {
    let n = ord_int_u64(x.numer(), p)?;
    let d = ord_int_u64(x.denom(), p).unwrap_or(0);
    Some(n as i64 - d as i64)
}

pub fn ord_rat(x: &Q, p: Prime) -> PAdicValuation {
    match ord_rat_i64(x, p) {
        Some(v) => PAdicValuation::Finite(q(v)),
        None => PAdicValuation::Infinite,
    }
}

/// `|x|_p = p^(-ord_p x)`, and `0` for `x = 0`.
pub fn padic_norm(x: &Q, p: Prime) -> Q {
    match ord_rat_i64(x, p) {
        Some(v) => pow_i64(&q(p.get() as i64), -v),
        None => Q::zero(),
    }
}

/// A finite p-adic digit expansion, most significant digit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitString {
    pub negative: bool,
    /// Digits, most significant first, leading zeros stripped.
    pub digits: Vec<u64>,
    /// Number of digits after the radix point.
    pub fractional: usize,
}

impl DigitString {
    /// The rational these digits spell out (sign included).
    pub fn value(&self, p: Prime) -> Q {
        let pb = p.to_bigint();
        let mut acc = BigInt::zero();
        for &d in &self.digits {
            acc = acc * &pb + BigInt::from(d);
        }
        let v = Q::new(acc, num_traits::pow(pb, self.fractional));
        if self.negative {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        let sep = |d: u64| -> String {
            if d < 10 {
                d.to_string()
            } else {
                format!("[{d}]")
            }
        };
        let int_len = self.digits.len().saturating_sub(self.fractional);
        if int_len == 0 {
            f.write_str("0")?;
            if self.fractional > 0 {
                f.write_str(".")?;
                for _ in self.digits.len()..self.fractional {
                    f.write_str("0")?;
                }
            }
            for &d in &self.digits {
                f.write_str(&sep(d))?;
            }
            return Ok(());
        }
        for (i, &d) in self.digits.iter().enumerate() {
            if i == int_len && self.fractional > 0 {
                f.write_str(".")?;
            }
            f.write_str(&sep(d))?;
        }
        Ok(())
    }
}

/// The `n` least significant p-adic digits of `|x|`, starting at position
/// `min(ord_p x, 0)`; the sign is carried as a flag.
pub fn digits(x: &Q, p: Prime, n: usize) -> Result<DigitString> {
    if n == 0 {
        return Err(Error::invalid("digit count must be positive"));
    }
    let Some(ord) = ord_rat_i64(x, p) else {
        return Ok(DigitString {
            negative: false,
            digits: vec![],
            fractional: 0,
        });
    };
    let start = ord.min(0);
    let pb = p.to_bigint();
    // u has a denominator prime to p.
    let u = x.abs() * pow_i64(&q(p.get() as i64), -start);
    let modulus = num_traits::pow(pb.clone(), n);
    let den_inv = u
        .denom()
        .extended_gcd(&modulus)
        .x
        .mod_floor(&modulus);
    let mut residue = (u.numer() * den_inv).mod_floor(&modulus);
    let mut low_first = Vec::with_capacity(n);
    for _ in 0..n {
        let (quot, rem) = residue.div_rem(&pb);
        low_first.push(rem.to_u64().expect("digit fits u64"));
        residue = quot;
    }
    let fractional = (-start) as usize;
    let mut digits: Vec<u64> = low_first.into_iter().rev().collect();
    // Strip leading zeros, but never into the fractional part.
    let int_len = digits.len().saturating_sub(fractional);
    let lead = digits
        .iter()
        .take(int_len)
        .take_while(|&&d| d == 0)
        .count();
    digits.drain(..lead);
    Ok(DigitString {
        negative: x.is_negative(),
        digits,
        fractional,
    })
}

/// Whether two rationals agree modulo `p^k` (both must be p-integral after scaling).
pub fn congruent_mod_power(a: &Q, b: &Q, p: Prime, k: i64) -> bool {
    match ord_rat_i64(&(a - b), p) {
        None => true,
        Some(v) => v >= k,
    }
}

pub fn is_unit(x: &BigInt, p: Prime) -> bool {
    !(x % p.to_bigint()).is_zero()
}
