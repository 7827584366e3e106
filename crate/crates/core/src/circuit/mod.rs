//! Straight-line programs and additive-complexity circuits.

mod additive;
mod system;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ArithOp, DegreeCap, SparsePoly};
use crate::rational::Q;

pub use additive::{
    circuit_expand, circuit_validate, propagate_hulls, AdditiveCircuit, CoeffRing, FinalMonomial,
    Gate, PropagatedHulls,
};
pub use system::{to_poly_system, verify_system_root, EqTerm, Equation, PolySystem};

/// A commutative ring an SLP can be evaluated in.
pub trait Ring {
    type Elem: Clone;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// ℤ.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
}

/// ℚ.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = Q;
    fn one(&self) -> Q {
        Q::one()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a - b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
}

/// ℤ/nℤ, elements kept in `0..n`.
#[derive(Debug, Clone)]
pub struct IntegersMod {
    modulus: BigInt,
}

impl IntegersMod {
    pub fn new(modulus: BigInt) -> Result<Self> {
        if modulus <= BigInt::one() {
            return Err(Error::invalid("modulus must exceed 1"));
        }
        Ok(IntegersMod { modulus })
    }

    /// ℤ/p^kℤ.
    pub fn prime_power(p: crate::padic::Prime, k: u32) -> Result<Self> {
        Self::new(num_traits::pow(p.to_bigint(), k as usize))
    }

    pub fn reduce(&self, a: &BigInt) -> BigInt {
        a.mod_floor(&self.modulus)
    }
}

impl Ring for IntegersMod {
    type Elem = BigInt;
    fn one(&self) -> BigInt {
        self.reduce(&BigInt::one())
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a + b))
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a - b))
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a * b))
    }
}

/// One SLP step: node `i + 2` is `op(node l, node r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instr {
    pub op: ArithOp,
    pub l: usize,
    pub r: usize,
}

/// Straight-line program over nodes `1, x, f_2, ...`; its value is the last
/// node unless `out` names another one (only needed for the constant 1).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Slp {
    pub ops: Vec<Instr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<usize>,
}

impl Slp {
    pub fn new(ops: Vec<Instr>) -> Result<Self> {
        let s = Slp { ops, out: None };
        s.validate()?;
        Ok(s)
    }

    /// The zero-length program for the constant 1.
    pub fn one() -> Self {
        Slp {
            ops: vec![],
            out: Some(0),
        }
    }

    fn output(&self) -> usize {
        self.out.unwrap_or(self.ops.len() + 1)
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, ins) in self.ops.iter().enumerate() {
            if ins.l >= i + 2 || ins.r >= i + 2 {
                return Err(Error::MalformedSlp(format!(
                    "instruction {i} reads node {} but only nodes 0..{} exist",
                    ins.l.max(ins.r),
                    i + 1
                )));
            }
        }
        if self.output() > self.ops.len() + 1 {
            return Err(Error::MalformedSlp(format!("output node {} does not exist", self.output())));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("SLP serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let slp: Slp = serde_json::from_str(s)?;
        slp.validate()?;
        Ok(slp)
    }
}

/// Value of the program at `x` in `ring`.
pub fn slp_eval<R: Ring>(prog: &Slp, ring: &R, x: &R::Elem) -> Result<R::Elem> {
    prog.validate()?;
    let mut nodes = Vec::with_capacity(prog.len() + 2);
    nodes.push(ring.one());
    nodes.push(x.clone());
    for ins in &prog.ops {
        let (a, b) = (&nodes[ins.l], &nodes[ins.r]);
        let v = match ins.op {
            ArithOp::Add => ring.add(a, b),
            ArithOp::Sub => ring.sub(a, b),
            ArithOp::Mul => ring.mul(a, b),
        };
        nodes.push(v);
    }
    Ok(nodes.swap_remove(prog.output()))
}

/// The polynomial the program computes.
pub fn slp_expand(prog: &Slp, cap: DegreeCap) -> Result<SparsePoly> {
    prog.validate()?;
    let mut nodes: Vec<SparsePoly> = vec![SparsePoly::one(), SparsePoly::x()];
    for ins in &prog.ops {
        let (a, b) = (&nodes[ins.l], &nodes[ins.r]);
        let v = match ins.op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a.checked_mul(b, cap)?,
        };
        nodes.push(v);
    }
    Ok(nodes.swap_remove(prog.output()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Prime;
    use crate::rational::q;

    fn ins(op: ArithOp, l: usize, r: usize) -> Instr {
        Instr { op, l, r }
    }

    #[test]
    fn evaluation() {
        let sq = Slp::new(vec![ins(ArithOp::Mul, 1, 1)]).unwrap();
        assert_eq!(slp_eval(&sq, &Integers, &BigInt::from(3)).unwrap(), BigInt::from(9));
        assert_eq!(slp_eval(&Slp::default(), &Rationals, &q(5)).unwrap(), q(5));
        assert_eq!(slp_eval(&Slp::one(), &Rationals, &q(5)).unwrap(), q(1));
        let p = Slp::new(vec![ins(ArithOp::Mul, 1, 1), ins(ArithOp::Add, 2, 1)]).unwrap();
        assert_eq!(slp_eval(&p, &Integers, &BigInt::from(2)).unwrap(), BigInt::from(6));
        let m = IntegersMod::prime_power(Prime::new(2).unwrap(), 2).unwrap();
        assert_eq!(slp_eval(&p, &m, &BigInt::from(3)).unwrap(), BigInt::from(0));
    }

    #[test]
    fn expansion() {
        let cap = DegreeCap::DEFAULT;
        let e = |ops| slp_expand(&Slp::new(ops).unwrap(), cap).unwrap();
        assert_eq!(e(vec![ins(ArithOp::Mul, 1, 1)]), "x^2".parse().unwrap());
        assert_eq!(e(vec![ins(ArithOp::Add, 0, 0)]), SparsePoly::constant(q(2)));
        assert_eq!(
            e(vec![ins(ArithOp::Mul, 1, 1), ins(ArithOp::Sub, 2, 0)]),
            "x^2-1".parse().unwrap()
        );
        let mut sq = vec![];
        for i in 0..8 {
            sq.push(ins(ArithOp::Mul, i + 1, i + 1));
        }
        assert!(matches!(
            slp_expand(&Slp::new(sq).unwrap(), DegreeCap(100)),
            Err(Error::DegreeCap { .. })
        ));
    }

    #[test]
    fn malformed_indices() {
        assert!(Slp::new(vec![ins(ArithOp::Add, 2, 0)]).is_err());
        assert!(Slp::from_json(r#"{"ops":[{"op":"mul","l":1,"r":3}]}"#).is_err());
        assert!(Slp::from_json(r#"{"ops":[],"out":2}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"ops":[{"op":"mul","l":1,"r":1},{"op":"sub","l":2,"r":0}]}"#;
        assert_eq!(Slp::from_json(s).unwrap().to_json(), s);
        let one = r#"{"ops":[],"out":0}"#;
        assert_eq!(Slp::from_json(one).unwrap(), Slp::one());
        assert_eq!(Slp::one().to_json(), one);
    }
}
