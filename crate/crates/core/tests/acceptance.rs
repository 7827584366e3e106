//! One test per acceptance criterion. Each prints a `criterion N: PASS|FAIL` line.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigmatau::bounds::{bound_cx, bound_cx_chain, bound_np, bound_pcfew, bound_qp, bound_rational, tau_ratio, BoundValue};
use sigmatau::circuit::{circuit_expand, propagate_hulls, AdditiveCircuit};
use sigmatau::newton::{
    count_roots_in_disk, count_roots_qp, count_roots_zp, distinct_valuation_count, minkowski_sum, newton_polygon,
    slope_set, valuation_profile,
};
use sigmatau::padic::{digits, ord_rat, Prime};
use sigmatau::poly::{integer_roots, squarefree_part, sturm_count, DegreeCap, Interval, SparsePoly};
use sigmatau::rational::{q, q_frac, Q};
use sigmatau::search::{family, load_or_enumerate, random_circuit, tau_of, CircuitBounds, EnumCaps, FamilySpec};

use common::{exhaustive_zp_count, known_valuation_product, pr, random_int_poly};

const PRIMES: [u64; 3] = [2, 3, 5];

fn verdict(n: u32, ok: bool, elapsed: Duration, budget: Duration, detail: &str) {
    let timed = elapsed <= budget;
    let status = if ok && timed { "PASS" } else { "FAIL" };
    println!("criterion {n}: {status} ({detail}; {:.2?} of {:.0?})", elapsed, budget);
    assert!(ok, "criterion {n}: {detail}");
    assert!(timed, "criterion {n}: took {elapsed:.2?}, budget {budget:.0?}");
}

/// The shared circuit corpus of criteria 3, 8 and 9: `(circuit, f, prime)`.
fn circuit_corpus() -> (Vec<(AdditiveCircuit, SparsePoly, Prime)>, usize) {
    let bounds = CircuitBounds { max_exp: 6, max_const: 100, max_degree: 64 };
    let mut out = Vec::with_capacity(1000);
    let mut skipped = 0;
    for i in 0..1000u64 {
        let s = 1 + (i % 4) as usize;
        let p = pr(PRIMES[(i / 4 % 3) as usize]);
        let c = random_circuit(s, i, bounds);
        match circuit_expand(&c, DegreeCap(bounds.max_degree)) {
            Ok(f) if !f.is_zero() => out.push((c, f, p)),
            _ => skipped += 1,
        }
    }
    (out, skipped)
}

#[test]
fn criterion_01_newton_oracle() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = 0;
    for i in 0..1000 {
        let p = PRIMES[i % 3];
        let (f, vals) = known_valuation_product(&mut rng, p, 12);
        let mut want: BTreeMap<Q, u64> = BTreeMap::new();
        for a in vals {
            *want.entry(q(a as i64)).or_default() += 1;
        }
        if valuation_profile(&f, pr(p)).unwrap().entries != want {
            bad += 1;
        }
    }
    verdict(1, bad == 0, t.elapsed(), Duration::from_secs(10), &format!("{bad}/1000 profiles differ"));
}

#[test]
fn criterion_02_extremal_family() {
    let t = Instant::now();
    let mut bad = vec![];
    for p in PRIMES {
        for s in 1..=12u32 {
            let m = family(FamilySpec::Extremal { p: pr(p), s }, DegreeCap(1 << 16)).unwrap();
            let n = distinct_valuation_count(&m.poly, pr(p)).unwrap();
            if n != s as usize {
                bad.push(format!("p={p} s={s}: {n}"));
            }
        }
    }
    verdict(2, bad.is_empty(), t.elapsed(), Duration::from_secs(5), &format!("mismatches {bad:?}"));
}

#[test]
fn criterion_03_valuation_upper_bound_and_hulls() {
    let t = Instant::now();
    let (corpus, skipped) = circuit_corpus();
    let (mut over, mut below, mut ledger, mut unions) = (0, 0, 0, 0);
    for (c, f, p) in &corpus {
        let s = c.s;
        if distinct_valuation_count(f, *p).unwrap() > s * (s + 1) / 2 {
            over += 1;
        }
        let ph = propagate_hulls(c, *p).unwrap();
        let hull = ph.final_hull();
        if f.terms().any(|(e, coef)| !hull.on_or_above(e, ord_rat(coef, *p).finite().unwrap())) {
            below += 1;
        }
        if !ph.ledger_holds() {
            ledger += 1;
        }
        if !ph.slope_union_holds() {
            unions += 1;
        }
    }
    let detail = format!(
        "{} circuits ({skipped} skipped as zero); count > s(s+1)/2: {over}, points below hull: {below}, ledger violations: {ledger}, slope-union violations: {unions}",
        corpus.len()
    );
    verdict(3, over == 0 && below == 0 && ledger == 0 && unions == 0, t.elapsed(), Duration::from_secs(60), &detail);
}

#[test]
fn criterion_04_minkowski_and_slopes() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut sum_bad, mut slope_bad) = (0, 0);
    for i in 0..500 {
        let p = pr(PRIMES[i % 3]);
        let f = random_int_poly(&mut rng, 10, 5, 200);
        let g = random_int_poly(&mut rng, 10, 5, 200);
        let (nf, ng) = (newton_polygon(&f, p).unwrap(), newton_polygon(&g, p).unwrap());
        let nfg = newton_polygon(&(&f * &g), p).unwrap();
        if minkowski_sum(&nf, &ng) != nfg {
            sum_bad += 1;
        }
        if slope_set(&nf).union(&slope_set(&ng)) != slope_set(&nfg) {
            slope_bad += 1;
        }
    }
    let detail = format!("500 pairs; Minkowski mismatches {sum_bad}, slope-union mismatches {slope_bad}");
    verdict(4, sum_bad == 0 && slope_bad == 0, t.elapsed(), Duration::from_secs(5), &detail);
}

/// Distinct values among `xs` after clustering neighbours closer than `tol`.
fn cluster_count(mut xs: Vec<f64>, tol: f64) -> usize {
    xs.sort_by(f64::total_cmp);
    let mut n = 0;
    let mut last = f64::NEG_INFINITY;
    for x in xs {
        if x - last > tol {
            n += 1;
        }
        last = x;
    }
    n
}

// The stated count is false: the roots of (x+1)^d - 1 include 0 and the pairs
// ζ-1, ζ̄-1 share an absolute value, giving ⌊d/2⌋+1 values, which is ⌈d/2⌉ only
// for odd d. Over C_2 the nonzero roots ζ-1 with ζ of order 2^k (k >= 1) have
// valuation 2^(1-k), and all others are units, so the count is ord_2(d) plus one
// when d is not a power of two; it first exceeds 3 at d = 16. The check below is
// kept as stated and is expected to fail.
#[test]
#[ignore = "criterion is false for even d and for p=2, d=16; run with --ignored to see the FAIL line"]
fn criterion_05_cyclotomic_shift() {
    let t = Instant::now();
    let mut complex_bad = vec![];
    for d in 1..=20u64 {
        let f = family(FamilySpec::CyclotomicShift { d }, DegreeCap(64)).unwrap().poly;
        let coeffs: Vec<f64> = (0..=d).map(|e| sigmatau::bounds::approx(&f.coeff(e))).collect();
        let mut abs = vec![];
        for k in 0..d {
            let th = 2.0 * std::f64::consts::PI * k as f64 / d as f64;
            let (re, im) = (th.cos() - 1.0, th.sin());
            // Confirm it is a root by Horner evaluation relative to the coefficient size.
            let (mut pr_, mut pi_) = (0.0f64, 0.0f64);
            for c in coeffs.iter().rev() {
                let nr = pr_ * re - pi_ * im + c;
                pi_ = pr_ * im + pi_ * re;
                pr_ = nr;
            }
            let scale: f64 = coeffs.iter().map(|c| c.abs()).sum();
            assert!(pr_.hypot(pi_) <= 1e-9 * scale, "d={d} k={k} is not a root");
            abs.push(re.hypot(im));
        }
        let n = cluster_count(abs, 1e-9);
        if n != d.div_ceil(2) as usize {
            complex_bad.push((d, n));
        }
    }
    let bound = bound_np(2);
    let mut padic_bad = vec![];
    for d in 1..=64u64 {
        let f = family(FamilySpec::CyclotomicShift { d }, DegreeCap(64)).unwrap().poly;
        let n = distinct_valuation_count(&f, pr(2)).unwrap();
        if BigInt::from(n) > bound {
            padic_bad.push((d, n));
        }
    }
    let detail = format!(
        "complex (d, count) != ceil(d/2): {complex_bad:?}; 2-adic (d, count) > {bound}: {} cases, first {:?}",
        padic_bad.len(),
        padic_bad.first()
    );
    verdict(5, complex_bad.is_empty() && padic_bad.is_empty(), t.elapsed(), Duration::from_secs(5), &detail);
}

#[test]
fn criterion_06_tau_catalog() {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let (cat, _) = load_or_enumerate(dir.path(), 5, EnumCaps::default()).unwrap();
    let mut deg_bad = 0;
    for (key, tau, _) in cat.iter() {
        let f = sigmatau::search::key_to_poly(key);
        if f.degree().unwrap_or(0) > 1u64 << tau {
            deg_bad += 1;
        }
    }
    let examples = [("x", 0), ("x^2", 1), ("x^2+x", 2)];
    let got: Vec<_> = examples.iter().map(|(s, _)| tau_of(&s.parse().unwrap(), 5).unwrap()).collect();
    let ex_ok = examples.iter().zip(&got).all(|((_, want), g)| *g == Some(*want));
    // A second load must be served from the cache.
    let (again, outcome) = load_or_enumerate(dir.path(), 5, EnumCaps::default()).unwrap();
    let cached = matches!(outcome, sigmatau::search::CacheOutcome::Hit) && again.len() == cat.len();
    let detail = format!(
        "{} entries, degree > 2^tau: {deg_bad}, tau(x, x^2, x^2+x) = {got:?}, cache hit on reload: {cached}",
        cat.len()
    );
    verdict(6, deg_bad == 0 && ex_ok && cached, t.elapsed(), Duration::from_secs(600), &detail);
}

#[test]
fn criterion_07_hensel_exactness() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut checked, mut drawn, mut bad) = (0, 0, vec![]);
    while checked < 200 {
        drawn += 1;
        let p = PRIMES[checked % 3];
        let deg = rng.gen_range(1..=6);
        let f = random_int_poly(&mut rng, deg, 4, 30);
        if f.degree().unwrap() == 0 || squarefree_part(&f).unwrap().degree() != f.degree() {
            continue;
        }
        // Residue enumeration up to 5^8 per polynomial.
        let Some(want) = exhaustive_zp_count(&f, p, 400_000) else { continue };
        let got = count_roots_zp(&f, pr(p)).unwrap();
        if got != want {
            bad.push(format!("{f} p={p}: {got} vs {want}"));
        }
        checked += 1;
    }
    let detail = format!("200 squarefree polynomials ({drawn} drawn), mismatches {bad:?}");
    verdict(7, bad.is_empty(), t.elapsed(), Duration::from_secs(60), &detail);
}

#[test]
fn criterion_08_additive_bounds() {
    let t = Instant::now();
    let (corpus, _) = circuit_corpus();
    let (mut qp_bad, mut int_bad, mut max_qp, mut max_int) = (0, 0, 0, 0);
    for (c, f, p) in &corpus {
        let s = c.s as u64;
        let n_qp = count_roots_qp(f, *p).unwrap();
        let n_int = integer_roots(f).unwrap().len() as u64;
        max_qp = max_qp.max(n_qp);
        max_int = max_int.max(n_int);
        if !bound_qp(*p, s).admits(n_qp) {
            qp_bad += 1;
        }
        if !bound_rational(s).admits(n_int) {
            int_bad += 1;
        }
    }
    let detail = format!(
        "{} circuits; Q_p violations {qp_bad} (max count {max_qp}), integral-root violations {int_bad} (max count {max_int})",
        corpus.len()
    );
    verdict(8, qp_bad == 0 && int_bad == 0, t.elapsed(), Duration::from_secs(60), &detail);
}

#[test]
fn criterion_09_disk_bounds() {
    let t = Instant::now();
    let (corpus, _) = circuit_corpus();
    let radii = [q(1), q(2), q_frac(1, 2)];
    let (mut bad, mut chain_bad, mut domain) = (0, 0, BTreeMap::<String, usize>::new());
    let mut checked = 0;
    for (c, f, p) in &corpus {
        let s = c.s as u64;
        for r in &radii {
            let n = count_roots_in_disk(f, *p, r).unwrap();
            match bound_cx(*p, s, r).unwrap() {
                BoundValue::Domain { reason } => *domain.entry(format!("p={p} s={s} r={r}: {reason}")).or_default() += 1,
                b => {
                    checked += 1;
                    if !b.admits(n) {
                        bad += 1;
                    }
                }
            }
            let chain = bound_cx_chain(*p, s, r).unwrap();
            if !chain.admits(n) {
                chain_bad += 1;
            }
        }
    }
    for (k, v) in &domain {
        println!("  domain flag x{v}: {k}");
    }
    let detail = format!(
        "{checked} in-domain checks, violations {bad}; chain violations {chain_bad}; {} domain-flagged",
        domain.values().sum::<usize>()
    );
    verdict(9, bad == 0 && chain_bad == 0, t.elapsed(), Duration::from_secs(60), &detail);
}

#[test]
fn criterion_10_logistic_family() {
    let t = Instant::now();
    let mut bad = vec![];
    for j in 1..=4u32 {
        let f = family(FamilySpec::Logistic { j }, DegreeCap(64)).unwrap().poly;
        let closed = sturm_count(&f, &Interval::closed(q(0), q(1)).unwrap()).unwrap();
        let open = sturm_count(&f, &Interval::open(q(0), q(1)).unwrap()).unwrap();
        let n = 1u64 << j;
        println!("  j={j}: [0,1] has {closed}, (0,1) has {open}; the stated open-interval count {n} is off by one (x = 0 is a fixed point)");
        if closed != n || open != n - 1 {
            bad.push(j);
        }
    }
    verdict(10, bad.is_empty(), t.elapsed(), Duration::from_secs(10), &format!("mismatching j: {bad:?}"));
}

#[test]
fn criterion_11_shub_smale_family() {
    let t = Instant::now();
    let mut ok = true;
    let mut prev: Option<f64> = None;
    let mut rows = vec![];
    for j in 0..=3u32 {
        let m = family(FamilySpec::ShubSmale { j }, DegreeCap(64)).unwrap();
        let len = m.slp.as_ref().unwrap().len() as u64;
        let r = tau_ratio(&m.poly, len, true).unwrap();
        let k = r.implied_exponent.unwrap();
        ok &= r.integral_roots == 1 << j;
        if let Some(pk) = prev {
            ok &= k > pk;
        }
        prev = Some(k);
        rows.push(format!("j={j}: roots {} len {len} kappa {k:.4}", r.integral_roots));
    }
    verdict(11, ok, t.elapsed(), Duration::from_secs(10), &rows.join(", "));
}

#[test]
fn criterion_12_digits() {
    let t = Instant::now();
    let got = digits(&q_frac(12345, 49), pr(7), 5).unwrap().to_string();
    verdict(12, got == "506.64", t.elapsed(), Duration::from_secs(1), &format!("digits = {got}"));
}

#[test]
fn criterion_13_bound_evaluators() {
    let t = Instant::now();
    let mut notes = vec![];
    let mut ok = true;

    let np3 = bound_np(3);
    ok &= np3 == BigInt::from(6);
    let rat1 = bound_rational(1);
    ok &= rat1.integer() == Some(&BigInt::from(16));
    let few = bound_pcfew(pr(2), &[1], &[vec![1]], &[q(1)]).unwrap();
    ok &= few.integer() == Some(&BigInt::from(0));
    notes.push(format!("np(3)={np3}, rational(1)={rat1}, pcfew(2,(1))={few}"));

    let mut certified = 0;
    let mut check = |b: &BoundValue| {
        if let BoundValue::Certified { lo, hi, .. } = b {
            certified += 1;
            if hi - lo >= q(1) {
                ok = false;
            }
        }
    };
    for p in PRIMES {
        for s in 0..=6u64 {
            check(&bound_qp(pr(p), s));
            for r in [q(1), q(2), q_frac(1, 2), q_frac(1, 3)] {
                check(&bound_cx(pr(p), s, &r).unwrap());
                check(&bound_cx_chain(pr(p), s, &r).unwrap());
            }
        }
        for m in 2..=5 {
            check(&bound_pcfew(pr(p), &[m], &[vec![1]], &[q(1)]).unwrap());
            check(&bound_pcfew(pr(p), &[m, 3], &[vec![1, 2], vec![1, 2]], &[q(1), q_frac(1, 2)]).unwrap());
        }
    }
    for s in 0..=6 {
        check(&bound_rational(s));
    }
    notes.push(format!("{certified} certified enclosures all narrower than 1"));
    verdict(13, ok, t.elapsed(), Duration::from_secs(5), &notes.join("; "));
}
