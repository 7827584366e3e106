use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::newton::{hull_union, minkowski_sum, slope_set, LowerHull, SlopeSet};
use crate::padic::{ord_rat, Prime};
use crate::poly::{DegreeCap, SparsePoly};
use crate::rational::Q;

/// `X_j = c * Π X_i^m[i] + d * Π X_i^mp[i]` over `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    #[serde(with = "crate::rational::serde_q")]
    pub c: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub d: Q,
    pub m: Vec<u64>,
    pub mp: Vec<u64>,
}

/// `f = c * Π X_i^m[i]` over `i <= s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinalMonomial {
    #[serde(with = "crate::rational::serde_q")]
    pub c: Q,
    pub m: Vec<u64>,
}

/// Which constants a presentation may use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffRing {
    #[default]
    Integers,
    Rationals,
}

impl CoeffRing {
    pub fn contains(self, c: &Q) -> bool {
        match self {
            CoeffRing::Integers => c.is_integer(),
            CoeffRing::Rationals => true,
        }
    }
}

/// A presentation with `s` additions: `X_0 = x`, gates `X_1..X_s`, then a
/// final monomial in `X_0..X_s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdditiveCircuit {
    pub s: usize,
    pub gates: Vec<Gate>,
    #[serde(rename = "final")]
    pub final_: FinalMonomial,
}

impl AdditiveCircuit {
    pub fn new(gates: Vec<Gate>, final_: FinalMonomial) -> Result<Self> {
        let c = AdditiveCircuit {
            s: gates.len(),
            gates,
            final_,
        };
        c.validate()?;
        Ok(c)
    }

    /// `c * x^e`, the `s = 0` presentation.
    pub fn monomial(c: Q, e: u64) -> Self {
        AdditiveCircuit {
            s: 0,
            gates: vec![],
            final_: FinalMonomial { c, m: vec![e] },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s != self.gates.len() {
            return Err(Error::MalformedCircuit(format!(
                "s = {} but {} gates given",
                self.s,
                self.gates.len()
            )));
        }
        for (i, g) in self.gates.iter().enumerate() {
            let j = i + 1;
            if g.m.len() != j || g.mp.len() != j {
                return Err(Error::MalformedCircuit(format!(
                    "gate {j} needs exponent vectors of length {j}"
                )));
            }
        }
        if self.final_.m.len() != self.s + 1 {
            return Err(Error::MalformedCircuit(format!(
                "final monomial needs an exponent vector of length {}",
                self.s + 1
            )));
        }
        self.degree_bounds()?;
        Ok(())
    }

    pub fn check_ring(&self, ring: CoeffRing) -> Result<()> {
        let consts = self
            .gates
            .iter()
            .flat_map(|g| [&g.c, &g.d])
            .chain([&self.final_.c]);
        for c in consts {
            if !ring.contains(c) {
                return Err(Error::MalformedCircuit(format!(
                    "constant {c} is outside the coefficient ring {ring:?}"
                )));
            }
        }
        Ok(())
    }

    /// Upper bounds on `deg X_0, ..., deg X_s, deg f`, ignoring cancellation.
    pub fn degree_bounds(&self) -> Result<Vec<u64>> {
        let overflow = || Error::MalformedCircuit("degree overflows u64".into());
        let dot = |m: &[u64], degs: &[u64]| -> Result<u64> {
            m.iter().zip(degs).try_fold(0u64, |acc, (&e, &d)| {
                e.checked_mul(d)
                    .and_then(|t| acc.checked_add(t))
                    .ok_or_else(overflow)
            })
        };
        let mut degs = vec![1u64];
        for g in &self.gates {
            let a = if g.c.is_zero() { 0 } else { dot(&g.m, &degs)? };
            let b = if g.d.is_zero() { 0 } else { dot(&g.mp, &degs)? };
            degs.push(a.max(b));
        }
        degs.push(dot(&self.final_.m, &degs)?);
        Ok(degs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serializes")
    }

    /// Parses and validates, requiring integer constants.
    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_json_in(s, CoeffRing::Integers)
    }

    pub fn from_json_in(s: &str, ring: CoeffRing) -> Result<Self> {
        let c: AdditiveCircuit = serde_json::from_str(s)?;
        c.validate()?;
        c.check_ring(ring)?;
        Ok(c)
    }
}

fn monomial_product(xs: &[SparsePoly], m: &[u64], c: &Q, cap: DegreeCap) -> Result<SparsePoly> {
    if c.is_zero() {
        return Ok(SparsePoly::zero());
    }
    let mut acc = SparsePoly::constant(c.clone());
    for (x, &e) in xs.iter().zip(m) {
        if e > 0 {
            acc = acc.checked_mul(&x.checked_pow(e, cap)?, cap)?;
        }
    }
    Ok(acc)
}

/// All intermediate polynomials `X_0, ..., X_s, f`.
pub(crate) fn expand_all(c: &AdditiveCircuit, cap: DegreeCap) -> Result<Vec<SparsePoly>> {
    c.validate()?;
    let mut xs = vec![SparsePoly::x()];
    for g in &c.gates {
        let a = monomial_product(&xs, &g.m, &g.c, cap)?;
        let b = monomial_product(&xs, &g.mp, &g.d, cap)?;
        xs.push(&a + &b);
    }
    let f = monomial_product(&xs, &c.final_.m, &c.final_.c, cap)?;
    xs.push(f);
    Ok(xs)
}

/// The polynomial the circuit presents.
pub fn circuit_expand(c: &AdditiveCircuit, cap: DegreeCap) -> Result<SparsePoly> {
    Ok(expand_all(c, cap)?.pop().unwrap())
}

/// Whether `c` presents exactly `f`.
pub fn circuit_validate(c: &AdditiveCircuit, f: &SparsePoly, cap: DegreeCap) -> Result<bool> {
    Ok(circuit_expand(c, cap)? == *f)
}

/// Hulls propagated through the gates without expanding anything.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagatedHulls {
    /// `P_0, ..., P_s`, then the hull for `f`.
    pub hulls: Vec<LowerHull>,
    /// `F_0, ..., F_s`.
    pub slopes: Vec<SlopeSet>,
    /// Edge counts `L_0, ..., L_{s+1}`.
    pub ledger: Vec<usize>,
}

impl PropagatedHulls {
    pub fn final_hull(&self) -> &LowerHull {
        self.hulls.last().unwrap()
    }

    /// Indices `i` with `L_{i+1} > L_i + i + 1`.
    pub fn ledger_violations(&self) -> Vec<usize> {
        self.ledger
            .windows(2)
            .enumerate()
            .filter(|(i, w)| w[1] > w[0] + i + 1)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn ledger_holds(&self) -> bool {
        self.ledger_violations().is_empty()
    }

    /// `|F_0 ∪ ... ∪ F_i|` for `i = 0..=s`. Every final slope lies in the last
    /// union, and each step adds at most `i + 1` new slopes.
    pub fn slope_union_counts(&self) -> Vec<usize> {
        let mut seen = std::collections::BTreeSet::new();
        self.slopes
            .iter()
            .map(|f| {
                seen.extend(f.0.iter().cloned());
                seen.len()
            })
            .collect()
    }

    /// Whether the slope unions grow by at most `i + 1` at step `i`.
    pub fn slope_union_holds(&self) -> bool {
        self.slope_union_counts().windows(2).enumerate().all(|(i, w)| w[1] <= w[0] + i + 1)
    }

    /// Whether the final hull has at most `s(s+1)/2` edges.
    pub fn final_edge_bound_holds(&self) -> bool {
        let s = self.slopes.len() - 1;
        self.final_hull().edge_count() <= s * (s + 1) / 2
    }
}

fn branch(hulls: &[LowerHull], m: &[u64], c: &Q, p: Prime) -> Option<LowerHull> {
    if c.is_zero() {
        return None;
    }
    let v = ord_rat(c, p).finite().unwrap().clone();
    let mut acc = LowerHull::point(0, v);
    for (h, &e) in hulls.iter().zip(m) {
        if e > 0 {
            acc = minkowski_sum(&acc, &h.scale(e));
        }
    }
    Some(acc)
}

/// `P_0` is the point `(1, 0)`; each gate's hull is the hull of the union of
/// its two branch hulls, each a Minkowski combination of earlier hulls shifted
/// by the constant's valuation.
pub fn propagate_hulls(c: &AdditiveCircuit, p: Prime) -> Result<PropagatedHulls> {
    c.validate()?;
    let mut hulls = vec![LowerHull::point(1, Q::zero())];
    for (i, g) in c.gates.iter().enumerate() {
        let a = branch(&hulls, &g.m, &g.c, p);
        let b = branch(&hulls, &g.mp, &g.d, p);
        let h = match (a, b) {
            (Some(a), Some(b)) => hull_union(&a, &b),
            (Some(h), None) | (None, Some(h)) => h,
            (None, None) => return Err(Error::ZeroGate(i + 1)),
        };
        hulls.push(h);
    }
    let f = branch(&hulls, &c.final_.m, &c.final_.c, p).ok_or(Error::ZeroGate(c.s + 1))?;
    let slopes = hulls.iter().map(slope_set).collect();
    hulls.push(f);
    let ledger = hulls.iter().map(LowerHull::edge_count).collect();
    Ok(PropagatedHulls {
        hulls,
        slopes,
        ledger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::newton_polygon;
    use crate::rational::q;

    fn gate(c: i64, d: i64, m: &[u64], mp: &[u64]) -> Gate {
        Gate {
            c: q(c),
            d: q(d),
            m: m.to_vec(),
            mp: mp.to_vec(),
        }
    }

    fn fin(c: i64, m: &[u64]) -> FinalMonomial {
        FinalMonomial { c: q(c), m: m.to_vec() }
    }

    fn poly(s: &str) -> SparsePoly {
        s.parse().unwrap()
    }

    const CYCLO: &str = r#"{"s":2,"gates":[{"c":"1","d":"1","m":[1],"mp":[0]},{"c":"1","d":"-1","m":[0,4],"mp":[0,0]}],"final":{"c":"1","m":[0,0,1]}}"#;

    #[test]
    fn expansions() {
        let cap = DegreeCap::DEFAULT;
        let mono = AdditiveCircuit::monomial(q(5), 3);
        assert_eq!(circuit_expand(&mono, cap).unwrap(), poly("5*x^3"));
        let bin = AdditiveCircuit::new(vec![gate(1, -3, &[7], &[0])], fin(1, &[0, 1])).unwrap();
        assert_eq!(circuit_expand(&bin, cap).unwrap(), poly("x^7-3"));
        let cyc = AdditiveCircuit::from_json(CYCLO).unwrap();
        assert_eq!(circuit_expand(&cyc, cap).unwrap(), poly("x^4+4*x^3+6*x^2+4*x"));
    }

    #[test]
    fn validation() {
        let cap = DegreeCap::DEFAULT;
        // 9 (x-7)^9 (2x+1)^4 - 11 (x-7)^99 (2x+1)^3
        let c = AdditiveCircuit::new(
            vec![
                gate(1, -7, &[1], &[0]),
                gate(2, 1, &[1, 0], &[0, 0]),
                gate(9, -11, &[0, 9, 4], &[0, 99, 3]),
            ],
            fin(1, &[0, 0, 0, 1]),
        )
        .unwrap();
        let f = poly("9*(x-7)^9*(2*x+1)^4 - 11*(x-7)^99*(2*x+1)^3");
        assert!(circuit_validate(&c, &f, cap).unwrap());
        assert!(!circuit_validate(&c, &poly("x"), cap).unwrap());
        let mono = AdditiveCircuit::monomial(q(1), 2);
        assert!(circuit_validate(&mono, &poly("x^2"), cap).unwrap());
    }

    #[test]
    fn malformed() {
        assert!(AdditiveCircuit::new(vec![gate(1, 1, &[1, 0], &[0])], fin(1, &[0, 1])).is_err());
        assert!(AdditiveCircuit::new(vec![], fin(1, &[0, 1])).is_err());
        let half = r#"{"s":0,"gates":[],"final":{"c":"1/2","m":[1]}}"#;
        assert!(AdditiveCircuit::from_json(half).is_err());
        assert!(AdditiveCircuit::from_json_in(half, CoeffRing::Rationals).is_ok());
    }

    #[test]
    fn json_round_trip() {
        assert_eq!(AdditiveCircuit::from_json(CYCLO).unwrap().to_json(), CYCLO);
    }

    #[test]
    fn propagation() {
        let p2 = Prime::new(2).unwrap();
        // (x-1)(x-2)(x-4) with one gate per factor.
        let c = AdditiveCircuit::new(
            vec![
                gate(1, -1, &[1], &[0]),
                gate(1, -2, &[1, 0], &[0, 0]),
                gate(1, -4, &[1, 0, 0], &[0, 0, 0]),
            ],
            fin(1, &[0, 1, 1, 1]),
        )
        .unwrap();
        let ph = propagate_hulls(&c, p2).unwrap();
        let f = circuit_expand(&c, DegreeCap::DEFAULT).unwrap();
        assert_eq!(ph.final_hull(), &newton_polygon(&f, p2).unwrap());
        assert_eq!(slope_set(ph.final_hull()), SlopeSet([q(0), q(-1), q(-2)].into()));
        assert_eq!(ph.final_hull().edge_count(), 3);
        assert!(ph.ledger_holds());

        let mono = propagate_hulls(&AdditiveCircuit::monomial(q(3), 4), p2).unwrap();
        assert_eq!(mono.final_hull().edge_count(), 0);

        let bin = AdditiveCircuit::new(vec![gate(1, 3, &[5], &[0])], fin(1, &[0, 1])).unwrap();
        let ph = propagate_hulls(&bin, p2).unwrap();
        assert_eq!(slope_set(ph.final_hull()), SlopeSet([q(0)].into()));

        let zero = AdditiveCircuit::new(vec![gate(0, 0, &[1], &[0])], fin(1, &[0, 1])).unwrap();
        assert!(matches!(propagate_hulls(&zero, p2), Err(Error::ZeroGate(1))));
    }
}
