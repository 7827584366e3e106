//! Rational interval arithmetic with outward dyadic rounding, plus enclosures
//! of `ln` and `e` from fixed-point series with explicit error terms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// Closed interval `[lo, hi]`; endpoints are kept on a `2^-prec` grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
    prec: u32,
}

fn round_down(x: &Q, prec: u32) -> Q {
    let scaled = x * Q::from_integer(BigInt::one() << prec);
    Q::new(scaled.floor().to_integer(), BigInt::one() << prec)
}

fn round_up(x: &Q, prec: u32) -> Q {
    let scaled = x * Q::from_integer(BigInt::one() << prec);
    Q::new(scaled.ceil().to_integer(), BigInt::one() << prec)
}

impl Interval {
    /// The exact point `x` (not rounded, so exact inputs stay exact).
    pub fn point(x: Q, prec: u32) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            prec,
        }
    }

    pub fn int(n: i64, prec: u32) -> Self {
        Self::point(Q::from_integer(BigInt::from(n)), prec)
    }

    fn rounded(lo: Q, hi: Q, prec: u32) -> Self {
        Interval {
            lo: round_down(&lo, prec),
            hi: round_up(&hi, prec),
            prec,
        }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_nonpositive(&self) -> bool {
        !self.hi.is_positive()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::rounded(&self.lo + &o.lo, &self.hi + &o.hi, self.prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::rounded(&self.lo - &o.hi, &self.hi - &o.lo, self.prec)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Self::rounded(lo, hi, self.prec)
    }

    /// `None` when `o` contains zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        if !o.lo.is_positive() && !o.hi.is_negative() {
            return None;
        }
        let inv = Interval {
            lo: Q::one() / &o.hi,
            hi: Q::one() / &o.lo,
            prec: self.prec,
        };
        Some(self.mul(&inv))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Interval::int(1, self.prec);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `ln` of a positive interval; `None` unless `lo > 0`.
    pub fn ln(&self) -> Option<Self> {
        if !self.lo.is_positive() {
            return None;
        }
        let w = self.prec + 16;
        let lo = ln_enclosure(&self.lo, w).lo;
        let hi = ln_enclosure(&self.hi, w).hi;
        Some(Self::rounded(lo, hi, self.prec))
    }

    /// Euler's number.
    pub fn e(prec: u32) -> Self {
        let w = prec + 16;
        let one = BigInt::one() << w;
        let mut t = one.clone();
        let mut sum = one;
        let mut n = 1u64;
        while !t.is_zero() {
            t /= n;
            sum += &t;
            n += 1;
        }
        // One ulp of truncation per term, and a tail below the last zero term.
        let err = BigInt::from(n + 2);
        let scale = Q::from_integer(BigInt::one() << w);
        Self::rounded(
            Q::from_integer(&sum - &err) / &scale,
            Q::from_integer(&sum + &err) / &scale,
            prec,
        )
    }

    /// Certified `floor`, if the enclosure does not straddle an integer.
    pub fn floor(&self) -> Option<BigInt> {
        let a = self.lo.floor().to_integer();
        (a == self.hi.floor().to_integer()).then_some(a)
    }

    /// Certified `ceil`.
    pub fn ceil(&self) -> Option<BigInt> {
        let a = self.lo.ceil().to_integer();
        (a == self.hi.ceil().to_integer()).then_some(a)
    }
}

/// `2^w · atanh(a/b)` truncated, for `0 ≤ a/b ≤ 1/3`, with an error bound in ulps.
fn atanh_fixed(a: &BigInt, b: &BigInt, w: u32) -> (BigInt, BigInt) {
    if a.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let mut t = (a << w) / b;
    let a2 = a * a;
    let b2 = b * b;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !t.is_zero() {
        sum += &t / (2 * k + 1);
        t = &t * &a2 / &b2;
        k += 1;
    }
    (sum, BigInt::from(3 * k + 3))
}

/// Enclosure of `ln x` for rational `x > 0`, at `2^-w` absolute precision or so.
pub(crate) fn ln_enclosure(x: &Q, w: u32) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive number");
    // x = 2^k y with 1 ≤ y < 2.
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let pow2 = |e: i64| {
        if e >= 0 {
            Q::from_integer(BigInt::one() << e as u64)
        } else {
            Q::new(BigInt::one(), BigInt::one() << (-e) as u64)
        }
    };
    let mut y = x / pow2(k);
    while y < Q::one() {
        y *= Q::from_integer(BigInt::from(2));
        k -= 1;
    }
    while y >= Q::from_integer(BigInt::from(2)) {
        y /= Q::from_integer(BigInt::from(2));
        k += 1;
    }
    let z = (&y - Q::one()) / (&y + Q::one());
    let (ly, ey) = atanh_fixed(z.numer(), z.denom(), w);
    let (l2, e2) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    let kb = BigInt::from(k);
    let v = (&kb * &l2 + &ly) * 2;
    let err = (kb.abs() * &e2 + &ey) * 2;
    let scale = Q::from_integer(BigInt::one() << w);
    Interval::rounded(
        Q::from_integer(&v - &err) / &scale,
        Q::from_integer(&v + &err) / &scale,
        w.saturating_sub(8),
    )
}

/// Runs `f` at doubling precision until it produces a value.
pub(crate) fn refine<T>(mut f: impl FnMut(u32) -> Option<T>) -> Option<T> {
    let mut prec = 64;
    while prec <= 1 << 14 {
        if let Some(v) = f(prec) {
            return Some(v);
        }
        prec *= 2;
    }
    None
}

/// Exact `n!`.
pub(crate) fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}
