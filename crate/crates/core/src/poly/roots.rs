//! Squarefree parts, discriminants, rational roots and Sturm counting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::dense::{self, IntPoly};
use super::SparsePoly;
use crate::error::{Error, Result};
use crate::padic::is_prime_u64;
use crate::rational::{pow_i64, Q};

/// Primitive integer polynomial with the same roots, each of multiplicity one,
/// and positive leading coefficient.
pub fn squarefree_part(f: &SparsePoly) -> Result<SparsePoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let dense = f.primitive().to_dense_int();
    Ok(SparsePoly::from_int_coeffs(&dense::squarefree(&dense)))
}

pub(crate) fn squarefree_dense(f: &SparsePoly) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(dense::squarefree(&f.primitive().to_dense_int()))
}

/// Exact discriminant `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(f: &SparsePoly) -> Result<Q> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Err(Error::invalid("discriminant of a constant"));
    }
    let prim = f.primitive();
    let scale = f.leading_coeff().unwrap() / prim.leading_coeff().unwrap();
    let d = dense::discriminant(&prim.to_dense_int());
    Ok(d * pow_i64(&scale, 2 * n as i64 - 2))
}

/// A real interval with per-endpoint open/closed flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::rational::serde_q")]
    pub lo: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub hi: Q,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn new(lo: Q, hi: Q, lo_open: bool, hi_open: bool) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid("interval with lo > hi"));
        }
        Ok(Interval {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }

    pub fn open(lo: Q, hi: Q) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn closed(lo: Q, hi: Q) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }
}

/// Number of distinct real roots of `f` in `interval`.
///
/// With zeros dropped, `V(a) - V(b)` counts the roots in `(a, b]` for a
/// squarefree Sturm sequence; endpoints are then added or removed by exact
/// evaluation.
pub fn sturm_count(f: &SparsePoly, interval: &Interval) -> Result<u64> {
    let g = squarefree_dense(f)?;
    let at_lo = dense::sign_at(&g, &interval.lo) == 0;
    let at_hi = dense::sign_at(&g, &interval.hi) == 0;
    if interval.lo == interval.hi {
        let closed = !interval.lo_open && !interval.hi_open;
        return Ok(u64::from(closed && at_lo));
    }
    let seq = dense::sturm_sequence(&g);
    let v_lo = dense::sign_variations(&seq, &interval.lo);
    let v_hi = dense::sign_variations(&seq, &interval.hi);
    let half_open = v_lo
        .checked_sub(v_hi)
        .ok_or_else(|| Error::Internal("Sturm variations increased".into()))?;
    let mut n = half_open as u64;
    if interval.hi_open && at_hi {
        n -= 1;
    }
    if !interval.lo_open && at_lo {
        n += 1;
    }
    Ok(n)
}

/// Cauchy bound: every complex root has modulus below this.
pub fn cauchy_bound(f: &SparsePoly) -> Result<Q> {
    let lc = f.leading_coeff().ok_or(Error::ZeroPolynomial)?.abs();
    let max = f
        .terms()
        .rev()
        .skip(1)
        .map(|(_, c)| c.abs())
        .max()
        .unwrap_or_else(Q::zero);
    Ok(Q::one() + max / lc)
}

/// All rational roots of `f`, ascending.
///
/// A rational root `a/b` in lowest terms of the primitive squarefree part `g`
/// has `|a| <= |g(0)|` and `b <= |lc(g)|`. Each one reduces to a simple root
/// modulo a prime `l` for which `g` stays squarefree, so the candidates are
/// the residues of `g` mod `l`, lifted by Newton iteration past `2|g(0)||lc(g)|`
/// and rationally reconstructed; every candidate is then checked exactly.
pub fn rational_roots(f: &SparsePoly) -> Result<Vec<Q>> {
    let mut g = squarefree_dense(f)?;
    let mut roots = Vec::new();
    if g.first().is_some_and(|c| c.is_zero()) {
        roots.push(Q::zero());
        g.remove(0);
    }
    if dense::degree(&g).unwrap_or(0) == 0 {
        return Ok(roots);
    }
    let a_bound = g[0].abs();
    let b_bound = g.last().unwrap().abs();
    let need = BigInt::from(2) * &a_bound * &b_bound;
    let ell = good_prime(&g);
    let ell_big = BigInt::from(ell);
    let deriv = dense::derivative(&g);
    for r in 0..ell {
        let r_big = BigInt::from(r);
        if !dense::eval(&g, &r_big).mod_floor(&ell_big).is_zero() {
            continue;
        }
        let lifted = newton_lift(&g, &deriv, r_big, &ell_big, &need);
        let Some((x, modulus)) = lifted else { continue };
        if let Some(root) = reconstruct(&x, &modulus, &a_bound, &b_bound) {
            if dense::sign_at(&g, &root) == 0 {
                roots.push(root);
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn reduce_mod(g: &[BigInt], ell: u64) -> Vec<u64> {
    let m = BigInt::from(ell);
    let mut v: Vec<u64> = g
        .iter()
        .map(|c| c.mod_floor(&m).to_u64().unwrap())
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod_u64(a: u64, m: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(m));
    e.x.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, m: u64) -> Vec<u64> {
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % m as u128) as u64;
    while !b.is_empty() {
        // a mod b
        let inv = inv_mod_u64(*b.last().unwrap(), m);
        while a.len() >= b.len() {
            let c = mulm(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + m - mulm(c, bc)) % m;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Smallest prime not dividing the leading coefficient modulo which `g` stays squarefree.
fn good_prime(g: &[BigInt]) -> u64 {
    let deg = g.len() - 1;
    (3u64..)
        .filter(|&l| is_prime_u64(l))
        .find(|&l| {
            let gm = reduce_mod(g, l);
            if gm.len() != deg + 1 {
                return false;
            }
            let dm: Vec<u64> = {
                let mut d: Vec<u64> = gm
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, &c)| ((c as u128 * i as u128) % l as u128) as u64)
                    .collect();
                while d.last() == Some(&0) {
                    d.pop();
                }
                d
            };
            !dm.is_empty() && gcd_mod(gm, dm, l).len() == 1
        })
        .expect("a squarefree polynomial has a good prime")
}

fn newton_lift(
    g: &[BigInt],
    deriv: &[BigInt],
    mut x: BigInt,
    ell: &BigInt,
    need: &BigInt,
) -> Option<(BigInt, BigInt)> {
    let mut modulus = ell.clone();
    while &modulus <= need {
        modulus = &modulus * &modulus;
        let d = dense::eval(deriv, &x).mod_floor(&modulus);
        let e = d.extended_gcd(&modulus);
        if !e.gcd.is_one() {
            return None;
        }
        let step = dense::eval(g, &x) * e.x;
        x = (x - step).mod_floor(&modulus);
    }
    Some((x, modulus))
}

/// Finds `a/b` with `|a| <= a_bound`, `0 < b <= b_bound`, `a = b x (mod m)`.
fn reconstruct(x: &BigInt, m: &BigInt, a_bound: &BigInt, b_bound: &BigInt) -> Option<Q> {
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > a_bound {
        let quot = &r0 / &r1;
        let r2 = &r0 - &quot * &r1;
        let t2 = &t0 - &quot * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &t1.abs() > b_bound {
        return None;
    }
    Some(Q::new(r1, t1))
}

/// Integer roots among the rational roots.
pub fn integer_roots(f: &SparsePoly) -> Result<Vec<BigInt>> {
    Ok(rational_roots(f)?
        .into_iter()
        .filter(|r| r.is_integer())
        .map(|r| r.to_integer())
        .collect())
}
