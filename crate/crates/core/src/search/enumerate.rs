//! Exhaustive SLP enumeration.
//!
//! A state is the set of values a program has computed so far; the next
//! instruction only depends on that set, so states are deduplicated as sets.
//! Shards are the distinct values of a first instruction and are explored
//! independently, then merged by minimum length with a fixed tie-break.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Instr, Slp};
use crate::error::{Error, Result};
use crate::poly::{ArithOp, SparsePoly};
use crate::rational::q_int;

/// Longest program length the enumerator accepts.
pub const HARD_MAX_LEN: usize = 7;

/// Dense integer coefficients, ascending, no trailing zeros.
pub type Key = Box<[i128]>;

/// Limits that scope an enumeration; a cache is only reusable under equal caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumCaps {
    /// Values with a coefficient of more bits are pruned.
    pub coeff_bits: u32,
    pub hard_max_len: usize,
}

impl Default for EnumCaps {
    fn default() -> Self {
        EnumCaps {
            coeff_bits: 120,
            hard_max_len: HARD_MAX_LEN,
        }
    }
}

/// Compact witness: up to `HARD_MAX_LEN` instructions as `(op, l, r)` bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Packed {
    len: u8,
    ops: [[u8; 3]; HARD_MAX_LEN],
}

impl Packed {
    const EMPTY: Packed = Packed {
        len: 0,
        ops: [[0; 3]; HARD_MAX_LEN],
    };

    fn push(mut self, op: u8, l: usize, r: usize) -> Packed {
        self.ops[self.len as usize] = [op, l as u8, r as u8];
        self.len += 1;
        self
    }

    fn to_slp(self, key: &[i128]) -> Slp {
        if self.len == 0 && key == [1] {
            return Slp::one();
        }
        Slp {
            out: None,
            ops: self.ops[..self.len as usize]
                .iter()
                .map(|&[op, l, r]| Instr {
                    op: OPS[op as usize],
                    l: l as usize,
                    r: r as usize,
                })
                .collect(),
        }
    }
}

const OPS: [ArithOp; 3] = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul];

fn trim(mut v: Vec<i128>) -> Key {
    while v.last() == Some(&0) {
        v.pop();
    }
    v.into_boxed_slice()
}

fn bits_ok(v: &[i128], bits: u32) -> bool {
    v.iter().all(|c| 128 - c.unsigned_abs().leading_zeros() <= bits)
}

/// `None` on i128 overflow.
fn apply(op: u8, a: &[i128], b: &[i128]) -> Option<Key> {
    match op {
        0 | 1 => {
            let n = a.len().max(b.len());
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                out.push(if op == 0 { x.checked_add(y)? } else { x.checked_sub(y)? });
            }
            Some(trim(out))
        }
        _ => {
            if a.is_empty() || b.is_empty() {
                return Some(Box::new([]));
            }
            let mut out = vec![0i128; a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] = out[i + j].checked_add(x.checked_mul(y)?)?;
                }
            }
            Some(trim(out))
        }
    }
}

pub fn key_to_poly(k: &[i128]) -> SparsePoly {
    SparsePoly::from_terms(
        k.iter()
            .enumerate()
            .map(|(e, &c)| (e as u64, q_int(c.into()))),
    )
}

/// `None` if some coefficient is not an integer fitting in i128.
pub fn poly_to_key(f: &SparsePoly) -> Option<Key> {
    let Some(d) = f.degree() else {
        return Some(Box::new([]));
    };
    let mut v = vec![0i128; d as usize + 1];
    for (e, c) in f.terms() {
        if !c.is_integer() {
            return None;
        }
        v[e as usize] = i128::try_from(c.to_integer()).ok()?;
    }
    Some(v.into_boxed_slice())
}

#[derive(Clone)]
struct State {
    /// Computed values after `1, x`, in program order.
    values: Vec<Key>,
    prog: Packed,
}

#[derive(Default)]
struct ShardResult {
    found: HashMap<Key, (u8, Packed)>,
    prunes: Vec<u64>,
}

fn better(a: &(u8, Packed), b: &(u8, Packed)) -> bool {
    (a.0, a.1) < (b.0, b.1)
}

fn explore(first: State, max_len: usize, caps: EnumCaps) -> ShardResult {
    let one: Key = Box::new([1]);
    let x: Key = Box::new([0, 1]);
    let mut res = ShardResult {
        prunes: vec![0; max_len + 1],
        ..Default::default()
    };
    res.found
        .insert(first.values[0].clone(), (1, first.prog));
    let mut level = vec![first];
    for len in 2..=max_len {
        let last = len == max_len;
        let mut next = Vec::new();
        let mut seen: HashSet<Vec<Key>> = HashSet::new();
        let degree_cap = 1usize << max_len;
        for st in &level {
            let nodes: Vec<&Key> = [&one, &x].into_iter().chain(st.values.iter()).collect();
            for op in 0u8..3 {
                for l in 0..nodes.len() {
                    // Add and mul commute; sub takes both orders.
                    let r0 = if op == 1 { 0 } else { l };
                    for r in r0..nodes.len() {
                        let Some(v) = apply(op, nodes[l], nodes[r]) else {
                            res.prunes[len] += 1;
                            continue;
                        };
                        if !bits_ok(&v, caps.coeff_bits) || v.len() > degree_cap + 1 {
                            res.prunes[len] += 1;
                            continue;
                        }
                        if nodes.iter().any(|n| **n == v) {
                            continue;
                        }
                        let prog = st.prog.push(op, l, r);
                        let cand = (len as u8, prog);
                        match res.found.get_mut(&v) {
                            Some(cur) => {
                                if better(&cand, cur) {
                                    *cur = cand;
                                }
                            }
                            None => {
                                res.found.insert(v.clone(), cand);
                            }
                        }
                        if !last {
                            let mut values = st.values.clone();
                            values.push(v);
                            let mut set = values.clone();
                            set.sort();
                            if seen.insert(set) {
                                next.push(State { values, prog });
                            }
                        }
                    }
                }
            }
        }
        level = next;
    }
    res
}

/// Every polynomial computable in at most `max_len` steps, with its τ and a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauCatalog {
    pub max_len: usize,
    pub caps: EnumCaps,
    entries: HashMap<Key, (u8, Packed)>,
    /// Pruned candidate values per length (index 0 unused).
    pub prunes: Vec<u64>,
}

impl TauCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn tau(&self, f: &SparsePoly) -> Option<usize> {
        let k = poly_to_key(f)?;
        self.entries.get(&k).map(|e| e.0 as usize)
    }

    pub fn witness(&self, f: &SparsePoly) -> Option<Slp> {
        let k = poly_to_key(f)?;
        self.entries.get(&k).map(|e| e.1.to_slp(&k))
    }

    pub fn count_at(&self, tau: usize) -> usize {
        self.entries.values().filter(|e| e.0 as usize == tau).count()
    }

    /// Entries of one length, sorted by key for deterministic output.
    pub fn entries_of_len(&self, tau: usize) -> Vec<(Key, Slp)> {
        let mut v: Vec<(Key, Slp)> = self
            .entries
            .iter()
            .filter(|(_, e)| e.0 as usize == tau)
            .map(|(k, e)| (k.clone(), e.1.to_slp(k)))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Iterates `(key, tau, witness)` in no particular order.
    pub fn iter(&self) -> impl Iterator<Item = (&Key, usize, Slp)> + '_ {
        self.entries.iter().map(|(k, e)| (k, e.0 as usize, e.1.to_slp(k)))
    }

    /// Restriction to programs of length at most `max_len`.
    pub fn truncate(&self, max_len: usize) -> TauCatalog {
        TauCatalog {
            max_len,
            caps: self.caps,
            entries: self
                .entries
                .iter()
                .filter(|(_, e)| e.0 as usize <= max_len)
                .map(|(k, e)| (k.clone(), *e))
                .collect(),
            prunes: self.prunes[..=max_len.min(self.prunes.len() - 1)].to_vec(),
        }
    }

    pub(crate) fn from_parts(
        max_len: usize,
        caps: EnumCaps,
        entries: Vec<(Key, usize, Slp)>,
        prunes: Vec<u64>,
    ) -> Result<TauCatalog> {
        let mut map = HashMap::with_capacity(entries.len());
        for (k, tau, slp) in entries {
            if slp.len() != tau || tau > HARD_MAX_LEN {
                return Err(Error::CacheCorrupt("witness length differs from tau".into()));
            }
            let mut p = Packed::EMPTY;
            for ins in &slp.ops {
                let op = OPS.iter().position(|o| *o == ins.op).unwrap() as u8;
                p = p.push(op, ins.l, ins.r);
            }
            map.insert(k, (tau as u8, p));
        }
        Ok(TauCatalog {
            max_len,
            caps,
            entries: map,
            prunes,
        })
    }
}

/// Breadth-first enumeration of all programs of length at most `max_len`.
pub fn enumerate_slps(max_len: usize, caps: EnumCaps) -> Result<TauCatalog> {
    if max_len > caps.hard_max_len || max_len > HARD_MAX_LEN {
        return Err(Error::invalid(format!(
            "max_len {max_len} exceeds the hard limit {}",
            caps.hard_max_len.min(HARD_MAX_LEN)
        )));
    }
    let one: Key = Box::new([1]);
    let x: Key = Box::new([0, 1]);
    let mut entries: HashMap<Key, (u8, Packed)> = HashMap::new();
    entries.insert(one.clone(), (0, Packed::EMPTY));
    entries.insert(x.clone(), (0, Packed::EMPTY));
    let mut prunes = vec![0u64; max_len + 1];
    if max_len == 0 {
        return Ok(TauCatalog {
            max_len,
            caps,
            entries,
            prunes,
        });
    }
    // Shards: the distinct new values of a first instruction.
    let base = [&one, &x];
    let mut shards: BTreeMap<Key, State> = BTreeMap::new();
    for op in 0u8..3 {
        for l in 0..2 {
            let r0 = if op == 1 { 0 } else { l };
            for r in r0..2 {
                let v = apply(op, base[l], base[r]).expect("small values");
                if base.iter().any(|b| **b == v) {
                    continue;
                }
                shards.entry(v.clone()).or_insert(State {
                    values: vec![v],
                    prog: Packed::EMPTY.push(op, l, r),
                });
            }
        }
    }
    let results: Vec<ShardResult> = shards
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|st| explore(st, max_len, caps))
        .collect();
    for r in results {
        for (i, n) in r.prunes.iter().enumerate() {
            prunes[i] += n;
        }
        for (k, cand) in r.found {
            match entries.get_mut(&k) {
                Some(cur) => {
                    if better(&cand, cur) {
                        *cur = cand;
                    }
                }
                None => {
                    entries.insert(k, cand);
                }
            }
        }
    }
    Ok(TauCatalog {
        max_len,
        caps,
        entries,
        prunes,
    })
}
