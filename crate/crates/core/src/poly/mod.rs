//! Sparse univariate polynomials over the rationals.
//!
//! Circuits expand into high-degree polynomials with few terms, so the
//! canonical form is an exponent-to-coefficient map. Dense conversion happens
//! only inside the gcd, Sturm and resultant routines in [`dense`].

pub mod dense;
mod parse;
pub mod roots;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational, q, q_int, Q};

pub use parse::parse_poly;
pub use roots::{discriminant, integer_roots, rational_roots, squarefree_part, sturm_count, Interval};

/// Upper bound on the degree of any polynomial an expansion may produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeCap(pub u64);

impl DegreeCap {
    pub const DEFAULT: DegreeCap = DegreeCap(1 << 16);

    pub fn check(self, degree: u64) -> Result<()> {
        if degree > self.0 {
            Err(Error::DegreeCap {
                degree,
                cap: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for DegreeCap {
    fn default() -> Self {
        DegreeCap::DEFAULT
    }
}

/// Exponent → nonzero coefficient. The zero polynomial is the empty map.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparsePoly {
    terms: BTreeMap<u64, Q>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn x() -> Self {
        Self::monomial(Q::one(), 1)
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Q, e: u64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        SparsePoly { terms }
    }

    /// Sums duplicate exponents and drops zero coefficients.
    pub fn from_terms<I: IntoIterator<Item = (u64, Q)>>(it: I) -> Self {
        let mut terms: BTreeMap<u64, Q> = BTreeMap::new();
        for (e, c) in it {
            *terms.entry(e).or_insert_with(Q::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        SparsePoly { terms }
    }

    /// Builds from integer coefficients in ascending degree order.
    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(e, &c)| (e as u64, q(c))))
    }

    pub fn from_int_coeffs(coeffs: &[BigInt]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(e, c)| (e as u64, q_int(c.clone()))),
        )
    }

    /// `x - r`.
    pub fn linear(r: Q) -> Self {
        Self::from_terms([(1, Q::one()), (0, -r)])
    }

    /// `Π (x - r)` over the given roots.
    pub fn from_roots<'a, I: IntoIterator<Item = &'a Q>>(roots: I) -> Self {
        roots
            .into_iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear(r.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().unwrap_or(0) == 0
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<u64> {
        self.terms.keys().next().copied()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_coeff(&self) -> Option<&Q> {
        self.terms.values().next_back()
    }

    pub fn coeff(&self, e: u64) -> Q {
        self.terms.get(&e).cloned().unwrap_or_else(Q::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u64, &Q)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Multiplies by `x^k`.
    pub fn shift_exponents(&self, k: u64) -> Self {
        SparsePoly {
            terms: self.terms.iter().map(|(&e, v)| (e + k, v.clone())).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self, cap: DegreeCap) -> Result<Self> {
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            cap.check(a.saturating_add(b))?;
        }
        Ok(self * other)
    }

    pub fn checked_pow(&self, k: u64, cap: DegreeCap) -> Result<Self> {
        if k == 0 {
            return Ok(Self::one());
        }
        if let Some(d) = self.degree() {
            cap.check(d.saturating_mul(k))?;
        }
        if self.terms.len() == 1 {
            let (&e, c) = self.terms.iter().next().unwrap();
            let ck = num_traits::pow(c.clone(), k as usize);
            return Ok(Self::monomial(ck, e * k));
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = k;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Exact value at `x`.
    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        let mut power = Q::one();
        let mut at = 0u64;
        for (&e, c) in &self.terms {
            if x.is_zero() {
                return if e == 0 { c.clone() } else { acc };
            }
            power *= num_traits::pow(x.clone(), (e - at) as usize);
            at = e;
            acc += c * &power;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|(&e, _)| e > 0)
                .map(|(&e, c)| (e - 1, c * q(e as i64)))
                .collect(),
        }
    }

    /// `g(y) = f(c + y)`, by Taylor shift on the dense coefficients.
    pub fn shift(&self, c: &Q) -> Self {
        let Some(deg) = self.degree() else {
            return Self::zero();
        };
        if c.is_zero() {
            return self.clone();
        }
        let n = deg as usize;
        let mut a: Vec<Q> = (0..=deg).map(|e| self.coeff(e)).collect();
        // Horner-style synthetic division repeated n times.
        for i in 0..n {
            for j in (i..n).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        Self::from_terms(a.into_iter().enumerate().map(|(e, v)| (e as u64, v)))
    }

    /// Splits `f = x^k g` with `g(0) != 0`, returning `(g, k)`.
    pub fn strip_zero_root(&self) -> Result<(Self, u64)> {
        let k = self.lowest_degree().ok_or(Error::ZeroPolynomial)?;
        Ok((
            SparsePoly {
                terms: self.terms.iter().map(|(&e, c)| (e - k, c.clone())).collect(),
            },
            k,
        ))
    }

    /// `x^deg f(1/x)`.
    pub fn reversed(&self) -> Self {
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        SparsePoly {
            terms: self.terms.iter().map(|(&e, c)| (d - e, c.clone())).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Clears denominators and divides out the content; leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * q_int(lcm.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if self.leading_coeff().unwrap().is_negative() {
            g = -g;
        }
        SparsePoly {
            terms: self
                .terms
                .keys()
                .zip(ints)
                .map(|(&e, c)| (e, q_int(c / &g)))
                .collect(),
        }
    }

    /// Integer coefficients in ascending degree order. Requires an integral polynomial.
    pub fn to_dense_int(&self) -> Vec<BigInt> {
        let Some(d) = self.degree() else {
            return vec![];
        };
        let mut v = vec![BigInt::zero(); d as usize + 1];
        for (&e, c) in &self.terms {
            debug_assert!(c.is_integer());
            v[e as usize] = c.to_integer();
        }
        v
    }

    /// Polynomial long division over the rationals.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lc = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff().unwrap() / &lc;
            let e = rd - dd;
            rem = &rem - &divisor.scale(&c).shift_exponents(e);
            quot.insert(e, c);
        }
        Ok((SparsePoly { terms: quot }, rem))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial JSON")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if e == 0 {
                f.write_str(&fmt_rational(&mag))?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{}*", fmt_rational(&mag))?;
            }
            if e == 1 {
                f.write_str("x")?;
            } else {
                write!(f, "x^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({self})")
    }
}

impl std::str::FromStr for SparsePoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s, DegreeCap::DEFAULT)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<(u64, String)>,
}

impl Serialize for SparsePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(&e, c)| (e, fmt_rational(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(d)?;
        let mut terms = BTreeMap::new();
        let mut prev: Option<u64> = None;
        for (e, c) in raw.terms {
            if prev.is_some_and(|p| e >= p) {
                return Err(D::Error::custom("exponents must be strictly decreasing"));
            }
            prev = Some(e);
            let c = parse_rational(&c).map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom("zero coefficient"));
            }
            terms.insert(e, c);
        }
        Ok(SparsePoly { terms })
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;

    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut terms = self.terms.clone();
        for (&e, c) in &rhs.terms {
            let slot = terms.entry(e).or_insert_with(Q::zero);
            *slot += c;
            if slot.is_zero() {
                terms.remove(&e);
            }
        }
        SparsePoly { terms }
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;

    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;

    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let mut terms: BTreeMap<u64, Q> = BTreeMap::new();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                *terms.entry(ea + eb).or_insert_with(Q::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        SparsePoly { terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Ring operation selector shared by polynomials and circuits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn arith(f: &SparsePoly, g: &SparsePoly, op: ArithOp) -> SparsePoly {
    match op {
        ArithOp::Add => f + g,
        ArithOp::Sub => f - g,
        ArithOp::Mul => f * g,
    }
}
