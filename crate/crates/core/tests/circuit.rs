mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use sigmatau::circuit::{
    circuit_expand, propagate_hulls, slp_eval, slp_expand, to_poly_system, verify_system_root, AdditiveCircuit,
    Instr, IntegersMod, Integers, Slp,
};
use sigmatau::newton::distinct_valuation_count;
use sigmatau::padic::ord_rat;
use sigmatau::poly::{rational_roots, ArithOp, DegreeCap};
use sigmatau::rational::{q, Q};
use sigmatau::search::{random_circuit, CircuitBounds};

use common::pr;

const BOUNDS: CircuitBounds = CircuitBounds { max_exp: 4, max_const: 30, max_degree: 48 };

/// Direct evaluation of the gate chain, independent of the library's expansion.
fn eval_circuit(c: &AdditiveCircuit, x: &Q) -> Q {
    let mono = |xs: &[Q], m: &[u64]| xs.iter().zip(m).fold(Q::from_integer(1.into()), |acc, (v, &e)| acc * v.pow(e as i32));
    let mut xs = vec![x.clone()];
    for g in &c.gates {
        let v = &g.c * mono(&xs, &g.m) + &g.d * mono(&xs, &g.mp);
        xs.push(v);
    }
    &c.final_.c * mono(&xs, &c.final_.m)
}

fn arb_slp() -> impl Strategy<Value = Slp> {
    prop::collection::vec((0..3u8, any::<prop::sample::Index>(), any::<prop::sample::Index>()), 1..7).prop_map(|raw| {
        let ops = raw
            .into_iter()
            .enumerate()
            .map(|(i, (op, l, r))| Instr {
                op: [ArithOp::Add, ArithOp::Sub, ArithOp::Mul][op as usize],
                l: l.index(i + 2),
                r: r.index(i + 2),
            })
            .collect();
        Slp::new(ops).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn expansion_agrees_with_chain(s in 1usize..=4, seed in any::<u64>(), x in -4i64..=4) {
        let c = random_circuit(s, seed, BOUNDS);
        let f = circuit_expand(&c, DegreeCap(BOUNDS.max_degree)).unwrap();
        prop_assert_eq!(f.eval(&q(x)), eval_circuit(&c, &q(x)));
        prop_assert_eq!(AdditiveCircuit::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn rational_roots_solve_the_system(s in 1usize..=3, seed in any::<u64>()) {
        let c = random_circuit(s, seed, BOUNDS);
        let f = circuit_expand(&c, DegreeCap(BOUNDS.max_degree)).unwrap();
        prop_assume!(!f.is_zero());
        let sys = to_poly_system(&c);
        prop_assert_eq!(sys.equations.len(), s + 1);
        for r in rational_roots(&f).unwrap() {
            prop_assert!(verify_system_root(&sys, &c, &r));
        }
        // A non-root fails the last equation.
        let probe = q(1_000_003);
        prop_assert_eq!(verify_system_root(&sys, &c, &probe), f.eval(&probe) == q(0));
    }

    #[test]
    fn propagated_hull_bounds_coefficients(s in 1usize..=4, seed in any::<u64>(), pi in 0usize..3) {
        let p = pr([2, 3, 5][pi]);
        let c = random_circuit(s, seed, BOUNDS);
        let f = circuit_expand(&c, DegreeCap(BOUNDS.max_degree)).unwrap();
        prop_assume!(!f.is_zero());
        let ph = propagate_hulls(&c, p).unwrap();
        for (e, coef) in f.terms() {
            prop_assert!(ph.final_hull().on_or_above(e, ord_rat(coef, p).finite().unwrap()));
        }
        prop_assert!(ph.slope_union_holds());
        prop_assert!(ph.final_hull().edge_count() <= *ph.slope_union_counts().last().unwrap());
        prop_assert!(distinct_valuation_count(&f, p).unwrap() <= s * (s + 1) / 2);
    }

    #[test]
    fn slp_evaluation_commutes_with_reduction(prog in arb_slp(), x in -50i64..=50, m in 2u64..1000) {
        let f = slp_expand(&prog, DegreeCap(1 << 12)).unwrap();
        let exact = slp_eval(&prog, &Integers, &BigInt::from(x)).unwrap();
        prop_assert_eq!(Q::from_integer(exact.clone()), f.eval(&q(x)));
        let ring = IntegersMod::new(BigInt::from(m)).unwrap();
        let reduced = slp_eval(&prog, &ring, &ring.reduce(&BigInt::from(x))).unwrap();
        prop_assert_eq!(reduced, ring.reduce(&exact));
    }
}

/// The per-hull edge counts need not satisfy `L_(i+1) <= L_i + i + 1`: here the
/// expanded `X_2` has 2 edges and `X_3` has 6. The cumulative slope count,
/// which is what bounds the final hull, still grows by at most `i + 1`.
#[test]
fn edge_count_recurrence_counterexample() {
    let c = AdditiveCircuit::from_json(
        r#"{"s":3,"gates":[{"c":"16","d":"26","m":[0],"mp":[2]},{"c":"-11","d":"-30","m":[1,3],"mp":[3,0]},{"c":"-28","d":"-19","m":[2,1,4],"mp":[0,4,3]}],"final":{"c":"-29","m":[4,4,1,0]}}"#,
    )
    .unwrap();
    let p = pr(2);
    let ph = propagate_hulls(&c, p).unwrap();
    assert_eq!(ph.ledger, vec![0, 1, 2, 6, 3]);
    assert_eq!(ph.ledger_violations(), vec![2]);
    assert_eq!(ph.slope_union_counts(), vec![0, 1, 3, 6]);
    assert!(ph.slope_union_holds());

    // The expanded gate polynomial has the same 6 edges, so this is not an
    // artefact of propagation.
    let x3 = AdditiveCircuit::new(c.gates.clone(), sigmatau::circuit::FinalMonomial { c: q(1), m: vec![0, 0, 0, 1] }).unwrap();
    let f3 = circuit_expand(&x3, DegreeCap(1000)).unwrap();
    assert_eq!(sigmatau::newton::newton_polygon(&f3, p).unwrap().edge_count(), 6);
}
