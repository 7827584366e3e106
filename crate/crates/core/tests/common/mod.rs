//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use sigmatau::padic::Prime;
use sigmatau::poly::{discriminant, squarefree_part, SparsePoly};
use sigmatau::rational::{q, Q};

pub fn pr(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

pub fn poly(s: &str) -> SparsePoly {
    s.parse().unwrap()
}

/// `Π (x - p^a u)` with `u` prime to `p`; returns the polynomial and the `a`s.
pub fn known_valuation_product<R: Rng>(rng: &mut R, p: u64, max_deg: usize) -> (SparsePoly, Vec<u64>) {
    let deg = rng.gen_range(1..=max_deg);
    let mut f = SparsePoly::one();
    let mut vals = Vec::with_capacity(deg);
    for _ in 0..deg {
        let a = rng.gen_range(0..=4u32);
        let u = loop {
            let u: i64 = rng.gen_range(-40..=40);
            if u != 0 && u % p as i64 != 0 {
                break u;
            }
        };
        let root = q(u) * q(p.pow(a) as i64);
        f = &f * &SparsePoly::linear(root);
        vals.push(a as u64);
    }
    (f, vals)
}

/// Random integer polynomial with up to `max_terms` terms and degree at most `max_deg`.
pub fn random_int_poly<R: Rng>(rng: &mut R, max_deg: u64, max_terms: usize, bound: i64) -> SparsePoly {
    loop {
        let n = rng.gen_range(1..=max_terms);
        let f = SparsePoly::from_terms((0..n).map(|_| {
            (rng.gen_range(0..=max_deg), q(rng.gen_range(-bound..=bound)))
        }));
        if !f.is_zero() {
            return f;
        }
    }
}

/// ℤ_p root count by brute force over residues mod `p^k`, `k = floor(D/2) + 1`
/// with `D = ord_p disc`. `None` if `p^k` exceeds `limit`.
///
/// Every ℤ_p root `α` has `ord g'(α) <= D/2 < k`, and a residue `a` with
/// `ord g(a) - ord g'(a) >= k > ord g'(a)` lifts to exactly one root `≡ a`.
pub fn exhaustive_zp_count(f: &SparsePoly, p: u64, limit: u64) -> Option<u64> {
    let g = squarefree_part(f).unwrap();
    if g.degree().unwrap() == 0 {
        return Some(0);
    }
    let disc = discriminant(&g).unwrap();
    let mut d = 0u32;
    let mut n = disc.numer().clone();
    let pb = BigInt::from(p);
    while (&n % &pb) == BigInt::from(0) {
        n /= &pb;
        d += 1;
    }
    let k = d / 2 + 1;
    let pk = p.checked_pow(k)?;
    if pk > limit {
        return None;
    }
    let m2 = (pk as i128) * (pk as i128);
    let coeffs: Vec<(u64, i128)> = g
        .terms()
        .map(|(e, c)| (e, c.to_integer().to_i128().unwrap().rem_euclid(m2)))
        .collect();
    let deriv: Vec<(u64, i128)> = coeffs
        .iter()
        .filter(|(e, _)| *e > 0)
        .map(|&(e, c)| (e - 1, (c * e as i128).rem_euclid(m2)))
        .collect();
    let eval = |cs: &[(u64, i128)], a: i128| -> i128 {
        let mut acc = 0i128;
        for &(e, c) in cs {
            let mut t = c;
            for _ in 0..e {
                t = (t * a) % m2;
            }
            acc = (acc + t) % m2;
        }
        acc
    };
    let ord = |x: i128, cap: u32| -> u32 {
        let mut x = x;
        let mut v = 0;
        while v < cap && x % p as i128 == 0 {
            x /= p as i128;
            v += 1;
        }
        v
    };
    let mut count = 0;
    for a in 0..pk as i128 {
        let gd = ord(eval(&deriv, a), 2 * k);
        if gd >= k {
            continue;
        }
        let gv = ord(eval(&coeffs, a), 2 * k);
        if gv >= gd + k {
            count += 1;
        }
    }
    Some(count)
}

/// Rational roots by the rational-root theorem: every `±a/b` with `a | g(0)`, `b | lc`.
pub fn divisor_rational_roots(f: &SparsePoly) -> Vec<Q> {
    let g = squarefree_part(f).unwrap();
    let (h, k) = g.strip_zero_root().unwrap();
    let mut out = Vec::new();
    if k > 0 {
        out.push(q(0));
    }
    let c0 = h.coeff(0).to_integer().to_i64().unwrap().abs();
    let lc = h.leading_coeff().unwrap().to_integer().to_i64().unwrap().abs();
    let divs = |n: i64| (1..=n).filter(move |d| n % d == 0);
    for a in divs(c0) {
        for b in divs(lc) {
            for s in [1, -1] {
                let r = Q::new(BigInt::from(s * a), BigInt::from(b));
                if h.eval(&r) == q(0) && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    out
}
