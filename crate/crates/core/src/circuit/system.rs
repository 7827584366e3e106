use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::additive::AdditiveCircuit;
use crate::rational::Q;

/// A polynomial equation `Σ c * Π X_i^e_i = 0` in `X_0, ..., X_s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub terms: Vec<EqTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqTerm {
    #[serde(with = "crate::rational::serde_q")]
    pub c: Q,
    pub e: Vec<u64>,
}

impl Equation {
    fn from_terms(n: usize, terms: impl IntoIterator<Item = (Q, Vec<u64>)>) -> Self {
        let mut acc: BTreeMap<Vec<u64>, Q> = BTreeMap::new();
        for (c, mut e) in terms {
            e.resize(n, 0);
            *acc.entry(e).or_insert_with(Q::zero) += c;
        }
        Equation {
            terms: acc
                .into_iter()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| EqTerm { c, e })
                .collect(),
        }
    }

    /// Highest variable index with a nonzero exponent, plus one.
    pub fn support(&self) -> usize {
        self.terms
            .iter()
            .filter_map(|t| t.e.iter().rposition(|&x| x > 0))
            .max()
            .map_or(0, |i| i + 1)
    }

    pub fn eval(&self, xs: &[Q]) -> Q {
        self.terms
            .iter()
            .map(|t| {
                t.e.iter()
                    .zip(xs)
                    .fold(t.c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .fold(Q::zero(), |a, b| a + b)
    }
}

/// The `s + 1` equations in `X_0, ..., X_s`: one per gate, then the final monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySystem {
    pub num_vars: usize,
    pub equations: Vec<Equation>,
}

pub fn to_poly_system(c: &AdditiveCircuit) -> PolySystem {
    let n = c.s + 1;
    let mut equations = Vec::with_capacity(n);
    for (i, g) in c.gates.iter().enumerate() {
        let mut own = vec![0; n];
        own[i + 1] = 1;
        equations.push(Equation::from_terms(
            n,
            [
                (Q::one(), own),
                (-g.c.clone(), g.m.clone()),
                (-g.d.clone(), g.mp.clone()),
            ],
        ));
    }
    equations.push(Equation::from_terms(
        n,
        [(c.final_.c.clone(), c.final_.m.clone())],
    ));
    PolySystem {
        num_vars: n,
        equations,
    }
}

fn chain(c: &AdditiveCircuit, x: &Q) -> Vec<Q> {
    let mono = |xs: &[Q], m: &[u64], k: &Q| -> Q {
        if k.is_zero() {
            return Q::zero();
        }
        xs.iter()
            .zip(m)
            .fold(k.clone(), |acc, (v, &e)| acc * num_traits::pow(v.clone(), e as usize))
    };
    let mut xs = vec![x.clone()];
    for g in &c.gates {
        let v = mono(&xs, &g.m, &g.c) + mono(&xs, &g.mp, &g.d);
        xs.push(v);
    }
    xs
}

/// Runs the gate chain at `x` and checks that every equation vanishes there.
pub fn verify_system_root(sys: &PolySystem, c: &AdditiveCircuit, x: &Q) -> bool {
    if sys.num_vars != c.s + 1 || c.validate().is_err() {
        return false;
    }
    let xs = chain(c, x);
    sys.equations.iter().all(|e| e.eval(&xs).is_zero())
}
