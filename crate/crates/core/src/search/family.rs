//! The named polynomial families, with constructive programs where they exist.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::circuit::{AdditiveCircuit, FinalMonomial, Gate, Instr, Slp};
use crate::error::{Error, Result};
use crate::padic::Prime;
use crate::poly::{ArithOp, DegreeCap, SparsePoly};
use crate::rational::{q, q_int, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `(x - 1)(x - p)...(x - p^(s-1))`.
    Extremal { p: Prime, s: u32 },
    /// `(x + 1)^d - 1`.
    CyclotomicShift { d: u64 },
    /// `g_j(x) - x` with `g_1 = 4x(1 - x)`, `g_(j+1) = 4 g_j (1 - g_j)`.
    Logistic { j: u32 },
    /// `(x - 2)(x - 4)...(x - 2^(2^j))`.
    ShubSmale { j: u32 },
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Extremal { p, s } => write!(f, "extremal(p={p},s={s})"),
            FamilySpec::CyclotomicShift { d } => write!(f, "cyclotomic_shift(d={d})"),
            FamilySpec::Logistic { j } => write!(f, "logistic(j={j})"),
            FamilySpec::ShubSmale { j } => write!(f, "shub_smale(j={j})"),
        }
    }
}

/// A family member with whatever presentations are known for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub spec: FamilySpec,
    pub poly: SparsePoly,
    /// Its length bounds τ from above.
    pub slp: Option<Slp>,
    /// Its gate count bounds σ from above.
    pub circuit: Option<AdditiveCircuit>,
}

/// Records instructions and hands back node indices.
struct Builder {
    ops: Vec<Instr>,
}

impl Builder {
    const ONE: usize = 0;
    const X: usize = 1;

    fn new() -> Self {
        Builder { ops: vec![] }
    }

    fn op(&mut self, op: ArithOp, l: usize, r: usize) -> usize {
        self.ops.push(Instr { op, l, r });
        self.ops.len() + 1
    }

    fn finish(self) -> Slp {
        Slp::new(self.ops).expect("builder emits valid programs")
    }
}

fn gate(c: Q, d: Q, m: Vec<u64>, mp: Vec<u64>) -> Gate {
    Gate { c, d, m, mp }
}

fn unit(len: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

/// Gates `X_i = x - r_i`, final monomial their product.
fn product_circuit(roots: &[Q]) -> AdditiveCircuit {
    let gates = roots
        .iter()
        .enumerate()
        .map(|(i, r)| gate(q(1), -r.clone(), unit(i + 1, 0), vec![0; i + 1]))
        .collect();
    let mut m = vec![1; roots.len() + 1];
    m[0] = 0;
    AdditiveCircuit::new(gates, FinalMonomial { c: q(1), m }).expect("well-formed")
}

fn pow2(e: u64) -> Q {
    q_int(BigInt::from(1) << e)
}

fn check_cap(cap: DegreeCap, degree: u64) -> Result<()> {
    cap.check(degree)
}

pub fn family(spec: FamilySpec, cap: DegreeCap) -> Result<FamilyMember> {
    match spec {
        FamilySpec::Extremal { p, s } => {
            check_cap(cap, s as u64)?;
            let pq = q(p.get() as i64);
            let roots: Vec<Q> = (0..s).map(|i| num_traits::pow(pq.clone(), i as usize)).collect();
            Ok(FamilyMember {
                spec,
                poly: SparsePoly::from_roots(&roots),
                slp: None,
                circuit: Some(product_circuit(&roots)),
            })
        }
        FamilySpec::CyclotomicShift { d } => {
            if d == 0 {
                return Err(Error::invalid("d must be positive"));
            }
            check_cap(cap, d)?;
            let poly = (&SparsePoly::linear(q(-1)).checked_pow(d, cap)? - &SparsePoly::one()).clone();
            let circuit = AdditiveCircuit::new(
                vec![
                    gate(q(1), q(1), vec![1], vec![0]),
                    gate(q(1), q(-1), vec![0, d], vec![0, 0]),
                ],
                FinalMonomial {
                    c: q(1),
                    m: vec![0, 0, 1],
                },
            )?;
            // (x+1)^d by square-and-multiply, then subtract 1.
            let mut b = Builder::new();
            let base = b.op(ArithOp::Add, Builder::X, Builder::ONE);
            let mut acc = base;
            for bit in (0..63 - d.leading_zeros()).rev() {
                acc = b.op(ArithOp::Mul, acc, acc);
                if d >> bit & 1 == 1 {
                    acc = b.op(ArithOp::Mul, acc, base);
                }
            }
            b.op(ArithOp::Sub, acc, Builder::ONE);
            Ok(FamilyMember {
                spec,
                poly,
                slp: Some(b.finish()),
                circuit: Some(circuit),
            })
        }
        FamilySpec::Logistic { j } => {
            if j == 0 {
                return Err(Error::invalid("j must be positive"));
            }
            if j >= 64 {
                return Err(Error::DegreeCap { degree: u64::MAX, cap: cap.0 });
            }
            check_cap(cap, 1 << j)?;
            let four = SparsePoly::constant(q(4));
            let mut g = SparsePoly::x();
            for _ in 0..j {
                let one_minus = &SparsePoly::one() - &g;
                g = four.checked_mul(&g.checked_mul(&one_minus, cap)?, cap)?;
            }
            let poly = &g - &SparsePoly::x();
            let mut b = Builder::new();
            let two = b.op(ArithOp::Add, Builder::ONE, Builder::ONE);
            let four = b.op(ArithOp::Add, two, two);
            let mut g = Builder::X;
            for _ in 0..j {
                let om = b.op(ArithOp::Sub, Builder::ONE, g);
                let prod = b.op(ArithOp::Mul, g, om);
                g = b.op(ArithOp::Mul, four, prod);
            }
            b.op(ArithOp::Sub, g, Builder::X);
            Ok(FamilyMember {
                spec,
                poly,
                slp: Some(b.finish()),
                circuit: None,
            })
        }
        FamilySpec::ShubSmale { j } => {
            if j >= 20 {
                return Err(Error::DegreeCap { degree: 1 << 20, cap: cap.0 });
            }
            let n = 1u64 << j;
            check_cap(cap, n)?;
            let roots: Vec<Q> = (1..=n).map(pow2).collect();
            let poly = SparsePoly::from_roots(&roots);
            let mut b = Builder::new();
            let two = b.op(ArithOp::Add, Builder::ONE, Builder::ONE);
            let mut power = two;
            let mut prod = b.op(ArithOp::Sub, Builder::X, power);
            for _ in 1..n {
                power = b.op(ArithOp::Mul, power, two);
                let factor = b.op(ArithOp::Sub, Builder::X, power);
                prod = b.op(ArithOp::Mul, prod, factor);
            }
            let _ = prod;
            Ok(FamilyMember {
                spec,
                poly,
                slp: Some(b.finish()),
                circuit: Some(product_circuit(&roots)),
            })
        }
    }
}
