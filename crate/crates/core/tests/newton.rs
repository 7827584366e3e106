mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sigmatau::newton::*;
use sigmatau::padic::ord_rat;
use sigmatau::poly::{rational_roots, SparsePoly};
use sigmatau::rational::{q, q_frac};

#[test]
fn profile_matches_constructed_valuations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..1000 {
        let p = [2, 3, 5][i % 3];
        let (f, vals) = known_valuation_product(&mut rng, p, 12);
        let mut want = BTreeMap::new();
        for a in vals {
            *want.entry(q(a as i64)).or_insert(0u64) += 1;
        }
        let got = valuation_profile(&f, pr(p)).unwrap();
        assert_eq!(got.entries, want, "f = {f}, p = {p}");
        assert_eq!(got.total(), f.degree().unwrap());
    }
}

#[test]
fn zp_count_matches_exhaustive_residues() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    let mut attempts = 0;
    let mut with_roots = 0;
    while checked < 200 {
        attempts += 1;
        let p = [2, 3, 5][attempts % 3];
        let f = random_int_poly(&mut rng, 6, 5, 12);
        if f.degree().unwrap() == 0 {
            continue;
        }
        let Some(want) = exhaustive_zp_count(&f, p, 200_000) else {
            continue;
        };
        assert_eq!(count_roots_zp(&f, pr(p)).unwrap(), want, "f = {f}, p = {p}");
        checked += 1;
        with_roots += u32::from(want > 0);
    }
    eprintln!("{checked} checked, {with_roots} with roots, {attempts} attempts");
    assert!(with_roots >= 40, "{with_roots}");
    assert!(attempts < 2000, "too many infeasible instances: {attempts}");
}

#[test]
fn zp_count_on_polynomials_with_integer_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    for i in 0..200 {
        let p = [2, 3, 5][i % 3];
        let roots: Vec<_> = (0..3).map(|_| q(rand::Rng::gen_range(&mut rng, -30..=30))).collect();
        let f = &SparsePoly::from_roots(&roots) * &poly("x^2+x+3");
        if let Some(want) = exhaustive_zp_count(&f, p, 400_000) {
            assert_eq!(count_roots_zp(&f, pr(p)).unwrap(), want, "f = {f}, p = {p}");
            checked += 1;
        }
    }
    eprintln!("{checked} integer-root instances checked");
    assert!(checked >= 100);
}

fn arb_int_poly() -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((0u64..10, -64i64..=64), 1..6)
        .prop_map(|ts| SparsePoly::from_terms(ts.into_iter().map(|(e, c)| (e, q(c)))))
        .prop_filter("nonzero", |f| !f.is_zero())
}

fn arb_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn minkowski_sum_is_product_polygon(f in arb_int_poly(), g in arb_int_poly(), p in arb_prime()) {
        let hf = newton_polygon(&f, pr(p)).unwrap();
        let hg = newton_polygon(&g, pr(p)).unwrap();
        let sum = minkowski_sum(&hf, &hg);
        prop_assert_eq!(&sum, &newton_polygon(&(&f * &g), pr(p)).unwrap());
        prop_assert_eq!(slope_set(&sum), slope_set(&hf).union(&slope_set(&hg)));
    }

    #[test]
    fn sum_lies_above_union(f in arb_int_poly(), g in arb_int_poly(), p in arb_prime()) {
        let u = hull_union(&newton_polygon(&f, pr(p)).unwrap(), &newton_polygon(&g, pr(p)).unwrap());
        let s = &f + &g;
        for (a, c) in s.terms() {
            let v = ord_rat(c, pr(p)).finite().unwrap().clone();
            prop_assert!(u.on_or_above(a, &v), "point ({}, {}) below union hull", a, v);
        }
    }

    #[test]
    fn profile_total_is_nonzero_root_count(f in arb_int_poly(), p in arb_prime()) {
        let (_, k) = f.strip_zero_root().unwrap();
        let total = valuation_profile(&f, pr(p)).unwrap().total();
        prop_assert_eq!(total, f.degree().unwrap() - k);
    }

    #[test]
    fn qp_count_dominates_rational_roots(f in arb_int_poly(), p in arb_prime()) {
        let n = rational_roots(&f).unwrap().len() as u64;
        prop_assert!(count_roots_qp(&f, pr(p)).unwrap() >= n);
    }

    #[test]
    fn qp_count_dominates_built_roots(
        num in prop::collection::vec(-20i64..20, 1..5),
        den in prop::collection::vec(1i64..9, 1..5),
        p in arb_prime(),
    ) {
        let roots: Vec<_> = num.iter().zip(den.iter().cycle()).map(|(&n, &d)| q_frac(n, d)).collect();
        let f = &SparsePoly::from_roots(&roots) * &poly("x^2+7");
        let n = rational_roots(&f).unwrap().len() as u64;
        prop_assert!(count_roots_qp(&f, pr(p)).unwrap() >= n);
    }
}
