//! Bounded search for small additive-complexity presentations.
//!
//! Every result is an upper bound on σ: only gates with exponents and
//! constants inside the given caps are tried. The first `s - 1` gates are
//! enumerated; the last gate and the final monomial are found by dividing `f`
//! by a candidate monomial, taking an exact k-th root and matching it against
//! binomials through fingerprints modulo 2^61 - 1. Every hit is re-checked by
//! exact expansion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::circuit::{circuit_validate, AdditiveCircuit, FinalMonomial, Gate};
use crate::poly::{DegreeCap, SparsePoly};
use crate::rational::{q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaBounds {
    pub s_max: usize,
    pub max_exp: u64,
    /// Bound on `|c|` for every constant, gates and final monomial alike.
    pub max_const: i64,
}

const P: u64 = (1 << 61) - 1;
const POINTS: [u64; 4] = [0x1d2c_3b4a_5968_7786, 0x0f1e_2d3c_4b5a_6978, 0x13579bdf2468ace, 0x2468_ace1_3579_bdf0];
type Fp = [u64; 4];

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn addm(a: u64, b: u64) -> u64 {
    (a + b) % P
}

fn subm(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn invm(a: u64) -> u64 {
    powm(a, P - 2)
}

fn int_mod(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P)).to_u64().expect("reduced")
}

fn q_mod(c: &Q) -> Option<u64> {
    let d = int_mod(c.denom());
    (d != 0).then(|| mulm(int_mod(c.numer()), invm(d)))
}

fn fingerprint(f: &SparsePoly) -> Option<Fp> {
    let mut out = [0; 4];
    for (i, &t) in POINTS.iter().enumerate() {
        let mut acc = 0;
        for (e, c) in f.terms() {
            acc = addm(acc, mulm(q_mod(c)?, powm(t % P, e)));
        }
        out[i] = acc;
    }
    Some(out)
}

/// All vectors in `[0, e]^n`.
fn exponent_vectors(n: usize, e: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=e).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Monic `R` with `R^k = u`, if one exists over ℚ. `u` must be monic.
fn kth_root(u: &SparsePoly, k: u64) -> Option<SparsePoly> {
    if k == 1 {
        return Some(u.clone());
    }
    let n = u.degree()?;
    if n % k != 0 {
        return None;
    }
    let r = (n / k) as usize;
    let alpha = Q::new(BigInt::one(), BigInt::from(k));
    // Reversed series: V(t) = t^n u(1/t), S = V^(1/k).
    let v: Vec<Q> = (0..=r).map(|i| u.coeff(n - i as u64)).collect();
    let mut s = vec![Q::one()];
    for m in 1..=r {
        let mut acc = Q::zero();
        for j in 1..=m {
            let w = &alpha * Q::from_integer(BigInt::from(j)) - Q::from_integer(BigInt::from(m - j));
            acc += w * &v[j] * &s[m - j];
        }
        s.push(acc / Q::from_integer(BigInt::from(m)));
    }
    let root = SparsePoly::from_terms(s.into_iter().enumerate().map(|(i, c)| ((r - i) as u64, c)));
    (root.checked_pow(k, DegreeCap(n)).ok()? == *u).then_some(root)
}

fn monomial_value(xs: &[SparsePoly], m: &[u64], cap: DegreeCap) -> Option<SparsePoly> {
    let mut acc = SparsePoly::one();
    for (x, &e) in xs.iter().zip(m) {
        if e > 0 {
            acc = acc.checked_mul(&x.checked_pow(e, cap).ok()?, cap).ok()?;
        }
    }
    Some(acc)
}

fn monomial_fp(fps: &[Fp], m: &[u64]) -> Fp {
    let mut out = [1; 4];
    for (fp, &e) in fps.iter().zip(m) {
        for i in 0..4 {
            out[i] = mulm(out[i], powm(fp[i], e));
        }
    }
    out
}

fn signed_small(v: u64, bound: i64) -> Option<i64> {
    if v <= bound as u64 {
        Some(v as i64)
    } else if P - v <= bound as u64 {
        Some(-((P - v) as i64))
    } else {
        None
    }
}

fn int_within(c: &Q, bound: i64) -> bool {
    c.is_integer() && !c.is_zero() && c.numer().abs() <= BigInt::from(bound)
}

struct Search<'a> {
    f: &'a SparsePoly,
    deg_f: u64,
    b: SigmaBounds,
    cap: DegreeCap,
}

impl Search<'_> {
    /// Normalized gates over `n` variables: `c > 0`, `gcd(c, d) = 1`, `m ≠ m'`.
    fn gates(&self, n: usize) -> Vec<Gate> {
        let vecs = exponent_vectors(n, self.b.max_exp);
        let mut out = vec![];
        for m in &vecs {
            for mp in &vecs {
                if m == mp {
                    continue;
                }
                for c in 1..=self.b.max_const {
                    for d in -self.b.max_const..=self.b.max_const {
                        if d != 0 && c.gcd(&d) == 1 {
                            out.push(Gate {
                                c: q(c),
                                d: q(d),
                                m: m.clone(),
                                mp: mp.clone(),
                            });
                        }
                    }
                }
            }
        }
        out
    }

    fn gate_value(&self, xs: &[SparsePoly], g: &Gate) -> Option<SparsePoly> {
        let a = monomial_value(xs, &g.m, self.cap)?.scale(&g.c);
        let b = monomial_value(xs, &g.mp, self.cap)?.scale(&g.d);
        Some(&a + &b)
    }

    /// Depth-first over prefixes of `target - 1` gates.
    fn prefix(&self, gates: &mut Vec<Gate>, xs: &mut Vec<SparsePoly>, fps: &mut Vec<Fp>, target: usize) -> Option<AdditiveCircuit> {
        if gates.len() + 1 == target {
            return self.finish(gates, xs, fps);
        }
        let limit = self.deg_f.max(1) * self.b.max_exp.max(1);
        for g in self.gates(xs.len()) {
            let Some(v) = self.gate_value(xs, &g) else { continue };
            if v.is_constant() || v.degree().unwrap_or(0) > limit {
                continue;
            }
            let Some(fp) = fingerprint(&v) else { continue };
            gates.push(g);
            xs.push(v);
            fps.push(fp);
            let hit = self.prefix(gates, xs, fps, target);
            gates.pop();
            xs.pop();
            fps.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }

    /// Finds the last gate `X_s` and final monomial `c M X_s^k` for a fixed prefix.
    fn finish(&self, gates: &[Gate], xs: &[SparsePoly], fps: &[Fp]) -> Option<AdditiveCircuit> {
        let vecs = exponent_vectors(xs.len(), self.b.max_exp);
        let mfps: Vec<Fp> = vecs.iter().map(|m| monomial_fp(fps, m)).collect();
        for m in &vecs {
            let Some(mon) = monomial_value(xs, m, self.cap) else { continue };
            if mon.degree()? > self.deg_f {
                continue;
            }
            let Ok((quot, rem)) = self.f.div_rem(&mon) else { continue };
            if !rem.is_zero() || quot.is_constant() {
                continue;
            }
            let lc = quot.leading_coeff()?.clone();
            let monic = quot.scale(&(Q::one() / &lc));
            for k in 1..=self.b.max_exp {
                let Some(root) = kth_root(&monic, k) else { continue };
                let Some(rfp) = fingerprint(&root) else { continue };
                for (ia, a) in vecs.iter().enumerate() {
                    for (ib, b) in vecs.iter().enumerate() {
                        if ia == ib {
                            continue;
                        }
                        let Some((c, d)) = self.solve(&mfps[ia], &mfps[ib], &rfp) else { continue };
                        let g = Gate {
                            c: q(c),
                            d: q(d),
                            m: a.clone(),
                            mp: b.clone(),
                        };
                        let Some(gv) = self.gate_value(xs, &g) else { continue };
                        let Some(glc) = gv.leading_coeff() else { continue };
                        let cf = &lc / num_traits::pow(glc.clone(), k as usize);
                        if !int_within(&cf, self.b.max_const) {
                            continue;
                        }
                        let mut fm = m.clone();
                        fm.push(k);
                        let mut all = gates.to_vec();
                        all.push(g);
                        let Ok(circ) = AdditiveCircuit::new(all, FinalMonomial { c: cf, m: fm }) else { continue };
                        if circuit_validate(&circ, self.f, self.cap).unwrap_or(false) {
                            return Some(circ);
                        }
                    }
                }
            }
        }
        None
    }

    /// Normalized `(c, d)` with `r ∝ c·a + d·b` at every fingerprint point.
    fn solve(&self, a: &Fp, b: &Fp, r: &Fp) -> Option<(i64, i64)> {
        let det = subm(mulm(a[0], b[1]), mulm(a[1], b[0]));
        if det == 0 {
            return None;
        }
        let inv = invm(det);
        let alpha = mulm(subm(mulm(r[0], b[1]), mulm(r[1], b[0])), inv);
        let beta = mulm(subm(mulm(a[0], r[1]), mulm(a[1], r[0])), inv);
        if alpha == 0 || beta == 0 {
            return None;
        }
        for i in 2..4 {
            if addm(mulm(alpha, a[i]), mulm(beta, b[i])) != r[i] {
                return None;
            }
        }
        let ratio = mulm(beta, invm(alpha));
        (1..=self.b.max_const).find_map(|c| {
            let d = signed_small(mulm(ratio, c as u64), self.b.max_const)?;
            (d != 0 && c.gcd(&d) == 1).then_some((c, d))
        })
    }
}

/// Smallest `s ≤ s_max` with a presentation inside `bounds`, and that presentation.
pub fn sigma_upper_search(f: &SparsePoly, bounds: &SigmaBounds) -> Option<(usize, AdditiveCircuit)> {
    let deg_f = f.degree()?;
    if f.num_terms() == 1 {
        let c = f.leading_coeff()?;
        return (deg_f <= bounds.max_exp && int_within(c, bounds.max_const))
            .then(|| (0, AdditiveCircuit::monomial(c.clone(), deg_f)));
    }
    if !f.is_integral() {
        return None;
    }
    let search = Search {
        f,
        deg_f,
        b: *bounds,
        cap: DegreeCap(deg_f.max(1) * bounds.max_exp.max(1) * (bounds.s_max as u64 + 1)),
    };
    let fp0 = fingerprint(&SparsePoly::x())?;
    for s in 1..=bounds.s_max {
        let hit = search.prefix(&mut vec![], &mut vec![SparsePoly::x()], &mut vec![fp0], s);
        if let Some(c) = hit {
            return Some((s, c));
        }
    }
    None
}
