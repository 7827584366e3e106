//! Dense integer polynomials (ascending coefficient vectors) for the
//! gcd, squarefree, Sturm and resultant computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{q_int, Q};

pub type IntPoly = Vec<BigInt>;

pub fn trim(mut v: IntPoly) -> IntPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

pub fn degree(v: &[BigInt]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// Divides out the content and makes the leading coefficient positive.
pub fn primitive_part(v: &[BigInt]) -> IntPoly {
    let v = trim(v.to_vec());
    if v.is_empty() {
        return v;
    }
    let mut g = content(&v);
    if v.last().unwrap().is_negative() {
        g = -g;
    }
    v.into_iter().map(|c| c / &g).collect()
}

pub fn derivative(v: &[BigInt]) -> IntPoly {
    trim(
        v.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
pub fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let db = degree(b).expect("pseudo-division by zero");
    let mut r = trim(a.to_vec());
    let Some(da) = degree(&r) else {
        return r;
    };
    if da < db {
        return r;
    }
    let lc = b[db].clone();
    let mut steps = da - db + 1;
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &lc;
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &lr * bc;
        }
        r = trim(r);
        steps -= 1;
    }
    // Pad the multiplier so the result is exactly lc^(da-db+1) * a mod b.
    if steps > 0 {
        let f = num_traits::pow(lc, steps);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Primitive gcd with positive leading coefficient.
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut a = primitive_part(a);
    let mut b = primitive_part(b);
    if degree(&a) < degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive_part(&r);
    }
    primitive_part(&a)
}

/// Exact quotient `a / b`; panics if the division is not exact over the integers.
pub fn exact_div(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = trim(a.to_vec());
    let Some(da) = degree(&r) else {
        return r;
    };
    if da < db {
        assert!(r.is_empty(), "inexact polynomial division");
        return vec![];
    }
    let mut quot = vec![BigInt::zero(); da - db + 1];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let (c, rem) = r[dr].div_rem(&b[db]);
        assert!(rem.is_zero(), "inexact polynomial division");
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &c * bc;
        }
        quot[shift] = c;
        r = trim(r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    trim(quot)
}

/// Primitive squarefree part `pp(f) / gcd(f, f')`, positive leading coefficient.
pub fn squarefree(v: &[BigInt]) -> IntPoly {
    let f = primitive_part(v);
    if degree(&f).unwrap_or(0) == 0 {
        return f;
    }
    let g = gcd(&f, &derivative(&f));
    primitive_part(&exact_div(&f, &g))
}

pub fn eval(v: &[BigInt], x: &BigInt) -> BigInt {
    v.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Sign of `v(x)` for rational `x`, via the homogenized integer evaluation.
pub fn sign_at(v: &[BigInt], x: &Q) -> i8 {
    let (a, b) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut bpow = BigInt::one();
    for c in v.iter().rev() {
        acc = acc * a + c * &bpow;
        bpow *= b;
    }
    // acc = b^n * v(a/b) up to a positive factor; b > 0.
    sign(&acc)
}

fn sign(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

/// `v(r + y)` for an integer `r`.
pub fn taylor_shift(v: &[BigInt], r: &BigInt) -> IntPoly {
    let mut a = v.to_vec();
    let n = a.len();
    if r.is_zero() || n < 2 {
        return a;
    }
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            let t = &a[j + 1] * r;
            a[j] += t;
        }
    }
    a
}

/// Sturm sequence of `v` with content stripping; signs are those of the
/// classical negated-remainder sequence.
pub fn sturm_sequence(v: &[BigInt]) -> Vec<IntPoly> {
    let s0 = primitive_part(v);
    let s1 = primitive_part(&derivative(&s0));
    let mut seq = vec![s0];
    if s1.is_empty() {
        return seq;
    }
    seq.push(s1);
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        let delta = degree(a).unwrap() - degree(b).unwrap();
        let mut r = pseudo_rem(a, b);
        if r.is_empty() {
            break;
        }
        let lc_neg = b.last().unwrap().is_negative() && (delta + 1) % 2 == 1;
        // next = -rem = -(r / lc^(delta+1)); keep only the sign of the scaling.
        if !lc_neg {
            r = r.into_iter().map(|c| -c).collect();
        }
        let g = content(&r);
        let next: IntPoly = r.into_iter().map(|c| c / &g).collect();
        let done = next.len() == 1;
        seq.push(next);
        if done {
            break;
        }
    }
    seq
}

/// Sign changes of the sequence at `x`, zeros dropped.
pub fn sign_variations(seq: &[IntPoly], x: &Q) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in seq {
        let sg = sign_at(s, x);
        if sg == 0 {
            continue;
        }
        if last != 0 && sg != last {
            count += 1;
        }
        last = sg;
    }
    count
}

/// Resultant of two nonzero integer polynomials, by CRT over word-size
/// primes until the Hadamard bound of the Sylvester matrix is covered.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> Q {
    let a = trim(a.to_vec());
    let b = trim(b.to_vec());
    assert!(!a.is_empty() && !b.is_empty(), "resultant of zero polynomial");
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m == 0 {
        return q_int(num_traits::pow(a[0].clone(), n));
    }
    if n == 0 {
        return q_int(num_traits::pow(b[0].clone(), m));
    }
    // log2 of a row norm is at most maxbits + log2(len)/2.
    let row_bits = |v: &[BigInt]| v.iter().map(|c| c.bits()).max().unwrap_or(0) as f64 + 0.5 * (v.len() as f64).log2();
    let bound_bits = (n as f64 * row_bits(&a) + m as f64 * row_bits(&b)).ceil() as u64 + 2;

    let mut modulus = BigInt::one();
    let mut acc = BigInt::zero();
    let mut l: u64 = (1 << 62) - 1;
    while modulus.bits() <= bound_bits {
        l -= 2;
        if !crate::padic::is_prime_u64(l) {
            continue;
        }
        let lb = BigInt::from(l);
        let reduce = |v: &[BigInt]| -> Vec<u64> {
            v.iter().map(|c| c.mod_floor(&lb).try_into().expect("residue fits u64")).collect()
        };
        let (am, bm) = (reduce(&a), reduce(&b));
        if am[m] == 0 || bm[n] == 0 {
            continue;
        }
        let r = resultant_mod(am, bm, l);
        // acc ≡ previous residues; lift to also match r mod l.
        let acc_l: u64 = acc.mod_floor(&lb).try_into().unwrap();
        let mod_l: u64 = modulus.mod_floor(&lb).try_into().unwrap();
        let t = mul_mod((r + l - acc_l) % l, pow_mod(mod_l, l - 2, l), l);
        acc += &modulus * t;
        modulus *= l;
    }
    if &acc * 2 > modulus {
        acc -= &modulus;
    }
    q_int(acc)
}

fn mul_mod(a: u64, b: u64, l: u64) -> u64 {
    (a as u128 * b as u128 % l as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, l: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, l);
        }
        b = mul_mod(b, b, l);
        e >>= 1;
    }
    r
}

/// Euclidean resultant over `F_l`; both leading coefficients must be nonzero.
fn resultant_mod(mut a: Vec<u64>, mut b: Vec<u64>, l: u64) -> u64 {
    let mut acc = 1;
    loop {
        let (m, n) = (a.len() - 1, b.len() - 1);
        if n == 0 {
            return mul_mod(acc, pow_mod(b[0], m as u64, l), l);
        }
        // a mod b, in place.
        let inv = pow_mod(b[n], l - 2, l);
        for i in (n..=m).rev() {
            let c = mul_mod(a[i], inv, l);
            if c != 0 {
                for j in 0..=n {
                    let sub = mul_mod(c, b[j], l);
                    a[i - n + j] = (a[i - n + j] + l - sub) % l;
                }
            }
        }
        a.truncate(n);
        while a.last() == Some(&0) {
            a.pop();
        }
        if a.is_empty() {
            return 0;
        }
        let k = a.len() - 1;
        // Res(A,B) = (-1)^(mn) lc(B)^(m-k) Res(B, A mod B).
        if (m * n) % 2 == 1 && acc != 0 {
            acc = l - acc;
        }
        acc = mul_mod(acc, pow_mod(b[n], (m - k) as u64, l), l);
        std::mem::swap(&mut a, &mut b);
    }
}

/// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(v: &[BigInt]) -> Q {
    let v = trim(v.to_vec());
    let n = degree(&v).expect("discriminant of zero polynomial");
    assert!(n >= 1, "discriminant of a constant");
    if n == 1 {
        return Q::one();
    }
    let d = derivative(&v);
    let res = resultant(&v, &d);
    let s = if (n * (n - 1) / 2) % 2 == 1 { -res } else { res };
    s / q_int(v[n].clone())
}
