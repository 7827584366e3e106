//! Seeded random circuits for the verification corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{AdditiveCircuit, FinalMonomial, Gate};
use crate::rational::{q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitBounds {
    /// Largest exponent on any variable.
    pub max_exp: u64,
    /// Constants are drawn from `[-max_const, max_const] \ {0}`.
    pub max_const: i64,
    /// No `X_j` and no final monomial may exceed this degree.
    pub max_degree: u64,
}

impl Default for CircuitBounds {
    fn default() -> Self {
        CircuitBounds {
            max_exp: 6,
            max_const: 100,
            max_degree: 64,
        }
    }
}

fn constant(rng: &mut ChaCha8Rng, c: i64) -> Q {
    let c = c.max(1);
    let v = rng.gen_range(1..=c);
    q(if rng.gen_bool(0.5) { v } else { -v })
}

/// Exponent vector over variables with the given degrees, total degree within `budget`.
fn exponents(rng: &mut ChaCha8Rng, degs: &[u64], max_exp: u64, budget: u64) -> Vec<u64> {
    let mut order: Vec<usize> = (0..degs.len()).collect();
    order.shuffle(rng);
    let mut left = budget;
    let mut m = vec![0; degs.len()];
    for i in order {
        let room = left.checked_div(degs[i]).map_or(max_exp, |r| r.min(max_exp));
        let e = rng.gen_range(0..=room);
        m[i] = e;
        left -= e * degs[i];
    }
    m
}

fn degree(degs: &[u64], m: &[u64]) -> u64 {
    degs.iter().zip(m).map(|(d, e)| d * e).sum()
}

/// Gate `j` has distinct exponent vectors unless all earlier variables are
/// constants, so each gate is a genuine binomial.
pub fn random_circuit(s: usize, seed: u64, bounds: CircuitBounds) -> AdditiveCircuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degs = vec![1u64];
    let mut gates = Vec::with_capacity(s);
    for _ in 0..s {
        let m = exponents(&mut rng, &degs, bounds.max_exp, bounds.max_degree);
        let mut mp = exponents(&mut rng, &degs, bounds.max_exp, bounds.max_degree);
        for _ in 0..16 {
            if mp != m {
                break;
            }
            mp = exponents(&mut rng, &degs, bounds.max_exp, bounds.max_degree);
        }
        if mp == m {
            // Nudge one coordinate; x has degree 1 so index 0 always works.
            mp[0] = if m[0] > 0 { m[0] - 1 } else { 1 };
        }
        let d = degree(&degs, &m).max(degree(&degs, &mp));
        gates.push(Gate {
            c: constant(&mut rng, bounds.max_const),
            d: constant(&mut rng, bounds.max_const),
            m,
            mp,
        });
        degs.push(d);
    }
    let m = exponents(&mut rng, &degs, bounds.max_exp, bounds.max_degree);
    let c = constant(&mut rng, bounds.max_const);
    AdditiveCircuit::new(gates, FinalMonomial { c, m }).expect("generator respects circuit shape")
}
