//! Closed-form root-count bounds and reports comparing them with actual counts.
//!
//! Formulas involving logarithms are evaluated in rational interval arithmetic
//! at doubling precision until the final floor or ceiling is certified.

mod interval;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use interval::Interval;
use interval::{factorial, refine};

use crate::circuit::{circuit_expand, AdditiveCircuit};
use crate::error::{Error, Result};
use crate::newton::{count_roots_in_disk_with, count_roots_qp, distinct_valuation_count, Multiplicity};
use crate::padic::Prime;
use crate::poly::{rational_roots, DegreeCap, SparsePoly};
use crate::rational::{fmt_rational, serde_q, Q};

mod serde_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rounding {
    Floor,
    Ceiling,
}

/// Value of a bound formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundValue {
    /// An exact integer.
    Exact {
        #[serde(with = "serde_bigint")]
        value: BigInt,
    },
    /// An exact rational and its ceiling.
    Rational {
        #[serde(with = "serde_q")]
        exact: Q,
        #[serde(with = "serde_bigint")]
        ceiling: BigInt,
    },
    /// A certified integer from an interval enclosure `[lo, hi]` of the real value.
    Certified {
        #[serde(with = "serde_bigint")]
        value: BigInt,
        rounding: Rounding,
        #[serde(with = "serde_q")]
        lo: Q,
        #[serde(with = "serde_q")]
        hi: Q,
    },
    /// The formula leaves its domain (non-positive log argument or base).
    Domain { reason: String },
}

impl BoundValue {
    fn exact(v: BigInt) -> Self {
        BoundValue::Exact { value: v }
    }

    fn rational(q: Q) -> Self {
        let ceiling = q.ceil().to_integer();
        if q.is_integer() {
            BoundValue::Exact { value: ceiling }
        } else {
            BoundValue::Rational { exact: q, ceiling }
        }
    }

    fn domain(reason: impl Into<String>) -> Self {
        BoundValue::Domain { reason: reason.into() }
    }

    /// The integer the bound certifies, if the formula is in its domain.
    pub fn integer(&self) -> Option<&BigInt> {
        match self {
            BoundValue::Exact { value } | BoundValue::Certified { value, .. } => Some(value),
            BoundValue::Rational { ceiling, .. } => Some(ceiling),
            BoundValue::Domain { .. } => None,
        }
    }

    /// `count ≤ bound`; false in the domain case.
    pub fn admits(&self, count: u64) -> bool {
        self.integer().is_some_and(|b| BigInt::from(count) <= *b)
    }
}

impl std::fmt::Display for BoundValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundValue::Exact { value } => write!(f, "{value}"),
            BoundValue::Rational { exact, ceiling } => write!(f, "{ceiling} (= ceil {})", fmt_rational(exact)),
            BoundValue::Certified { value, .. } => write!(f, "{value}"),
            BoundValue::Domain { reason } => write!(f, "n/a ({reason})"),
        }
    }
}

fn q_int(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

fn fifteen_halves_pow(s: u64) -> Q {
    num_traits::pow(Q::new(BigInt::from(15), BigInt::from(2)), s as usize)
}

/// Bound on the number of distinct root valuations for additive complexity `s`: `s(s+1)/2`.
pub fn bound_np(s: u64) -> BigInt {
    BigInt::from(s) * BigInt::from(s + 1) / 2
}

/// Bound on ℚ_p roots: `1 + (p-1) s² (15/2)^s s! N_p(s)`.
pub fn bound_qp(p: Prime, s: u64) -> BoundValue {
    let v = Q::one()
        + q_int(p.get() - 1) * q_int(s * s) * fifteen_halves_pow(s) * q_int(factorial(s)) * q_int(bound_np(s));
    BoundValue::rational(v)
}

/// Bound on rational roots: `1 + s³ (s+1) (15/2)^s s!`.
pub fn bound_rational(s: u64) -> BoundValue {
    let s3 = BigInt::from(s).pow(3);
    BoundValue::rational(Q::one() + q_int(s3 * (s + 1)) * fifteen_halves_pow(s) * q_int(factorial(s)))
}

/// The ℚ_2 bound with `N_2(s) = s(s+1)/2` substituted: `1 + s³ (s+1)/2 (15/2)^s s!`.
/// It is smaller than [`bound_rational`] by a factor of two in its non-constant part.
pub fn bound_rational_composed(s: u64) -> BoundValue {
    bound_qp(Prime::new(2).expect("2 is prime"), s)
}

fn check_r(r: &Q) -> Result<()> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(Error::invalid(format!("radius must be positive, got {}", fmt_rational(r))))
    }
}

fn certified(iv: &Interval, rounding: Rounding) -> Option<BoundValue> {
    let v = match rounding {
        Rounding::Floor => iv.floor()?,
        Rounding::Ceiling => iv.ceil()?,
    };
    Some(BoundValue::Certified {
        value: v,
        rounding,
        lo: iv.lo.clone(),
        hi: iv.hi.clone(),
    })
}

enum Step {
    Done(BoundValue),
    Retry,
}

fn run(mut f: impl FnMut(u32) -> Step) -> Result<BoundValue> {
    refine(|prec| match f(prec) {
        Step::Done(v) => Some(v),
        Step::Retry => None,
    })
    .ok_or_else(|| Error::Internal("bound could not be certified at 16384 bits".into()))
}

fn log_p(x: &Interval, ln_p: &Interval) -> Option<Interval> {
    x.ln()?.div(ln_p)
}

/// Disk-root bound `s² s! (3 + (3/r) log_p(2 / (r ln p)))^s`, rounded up.
pub fn bound_cx(p: Prime, s: u64, r: &Q) -> Result<BoundValue> {
    check_r(r)?;
    if s == 0 {
        return Ok(BoundValue::exact(BigInt::zero()));
    }
    let lead = BigInt::from(s * s) * factorial(s);
    let s32 = u32::try_from(s).map_err(|_| Error::invalid("s too large"))?;
    run(|prec| {
        let ln_p = Interval::point(q_int(p.get()), prec).ln().expect("p > 1");
        let rr = Interval::point(r.clone(), prec);
        let arg = match Interval::int(2, prec).div(&rr.mul(&ln_p)) {
            Some(a) => a,
            None => return Step::Retry,
        };
        let Some(lg) = log_p(&arg, &ln_p) else {
            return Step::Retry;
        };
        let base = Interval::int(3, prec).add(&Interval::int(3, prec).div(&rr).expect("r > 0").mul(&lg));
        if base.is_nonpositive() {
            return Step::Done(BoundValue::domain("base 3 + (3/r) log_p(2/(r ln p)) is not positive"));
        }
        if !base.is_positive() {
            return Step::Retry;
        }
        let v = Interval::point(q_int(lead.clone()), prec).mul(&base.pow(s32));
        certified(&v, Rounding::Ceiling).map_or(Step::Retry, Step::Done)
    })
}

fn c_const(prec: u32) -> Interval {
    let e = Interval::e(prec);
    e.div(&e.sub(&Interval::int(1, prec))).expect("e > 1")
}

fn check_lengths(n: usize, others: &[usize]) -> Result<()> {
    if n == 0 || others.iter().any(|&k| k != n) {
        return Err(Error::invalid("parameter vectors must be non-empty and of equal length"));
    }
    Ok(())
}

/// Multivariate ℚ_p^* root bound `(Π (p-1) m_i (m_i-1)/2) ⌊Π c (m_i-1) N_i [1 + log_p((m_i-1)/ln p)]⌋`
/// with `c = e/(e-1)`.
pub fn bound_amd(p: Prime, m: &[u64], n: &[u64]) -> Result<BoundValue> {
    check_lengths(m.len(), &[n.len()])?;
    if m.iter().any(|&mi| mi <= 1) {
        return Ok(BoundValue::exact(BigInt::zero()));
    }
    let lead: BigInt = m
        .iter()
        .map(|&mi| BigInt::from(p.get() - 1) * mi * (mi - 1) / 2)
        .product();
    run(|prec| {
        let ln_p = Interval::point(q_int(p.get()), prec).ln().expect("p > 1");
        let c = c_const(prec);
        let mut prod = Interval::int(1, prec);
        for (&mi, &ni) in m.iter().zip(n) {
            let arg = Interval::point(q_int(mi - 1), prec).div(&ln_p).expect("ln p > 0");
            let Some(lg) = log_p(&arg, &ln_p) else { return Step::Retry };
            let bracket = Interval::int(1, prec).add(&lg);
            if bracket.is_nonpositive() {
                return Step::Done(BoundValue::domain("1 + log_p((m_i-1)/ln p) is not positive"));
            }
            let factor = c.mul(&Interval::point(q_int((mi - 1) * ni), prec)).mul(&bracket);
            prod = prod.mul(&factor);
        }
        match prod.floor() {
            Some(fl) => Step::Done(BoundValue::Certified {
                value: &lead * fl,
                rounding: Rounding::Floor,
                lo: &prod.lo * q_int(lead.clone()),
                hi: &prod.hi * q_int(lead.clone()),
            }),
            None => Step::Retry,
        }
    })
}

/// Bound on roots near `(1, ..., 1)` for systems with `m_i` monomial terms in
/// equation `i`, which involves the variables `nsets[i]` (1-based), counted in
/// the polydisk `ord_p(x_j - 1) ≥ r_j`:
/// `⌊c^n Π (m_i-1)[Σ_{N_i} r_j + log_p((m_i-1)^{#N_i} / (Π_{N_i} r_j · ln^{#N_i} p))] / r_i⌋`.
pub fn bound_pcfew(p: Prime, m: &[u64], nsets: &[Vec<usize>], r: &[Q]) -> Result<BoundValue> {
    let n = m.len();
    check_lengths(n, &[nsets.len(), r.len()])?;
    for rj in r {
        check_r(rj)?;
    }
    for set in nsets {
        if set.is_empty() || set.iter().any(|&j| j == 0 || j > n) {
            return Err(Error::invalid(format!("index sets must be non-empty subsets of 1..={n}")));
        }
    }
    if m.iter().any(|&mi| mi <= 1) {
        return Ok(BoundValue::exact(BigInt::zero()));
    }
    let n32 = n as u32;
    run(|prec| {
        let ln_p = Interval::point(q_int(p.get()), prec).ln().expect("p > 1");
        let mut prod = c_const(prec).pow(n32);
        for i in 0..n {
            let k = nsets[i].len() as u32;
            let sum_r: Q = nsets[i].iter().map(|&j| r[j - 1].clone()).sum();
            let prod_r: Q = nsets[i].iter().map(|&j| r[j - 1].clone()).product();
            let num = Interval::point(q_int(BigInt::from(m[i] - 1).pow(k)), prec);
            let den = Interval::point(prod_r, prec).mul(&ln_p.pow(k));
            let Some(arg) = num.div(&den) else { return Step::Retry };
            let Some(lg) = log_p(&arg, &ln_p) else { return Step::Retry };
            let bracket = Interval::point(sum_r, prec).add(&lg);
            if bracket.is_nonpositive() {
                return Step::Done(BoundValue::domain(format!("bracket of factor {} is not positive", i + 1)));
            }
            if !bracket.is_positive() {
                return Step::Retry;
            }
            let factor = bracket
                .mul(&Interval::point(q_int(m[i] - 1), prec))
                .div(&Interval::point(r[i].clone(), prec))
                .expect("r_i > 0");
            prod = prod.mul(&factor);
        }
        certified(&prod, Rounding::Floor).map_or(Step::Retry, Step::Done)
    })
}

fn add_values(a: &BoundValue, b: &BoundValue) -> BoundValue {
    match (a.integer(), b.integer()) {
        (Some(x), Some(y)) => BoundValue::exact(x + y),
        _ => domain_of(a, b),
    }
}

fn mul_values(a: &BoundValue, b: &BoundValue) -> BoundValue {
    match (a.integer(), b.integer()) {
        (Some(x), Some(y)) => BoundValue::exact(x * y),
        _ => domain_of(a, b),
    }
}

fn domain_of(a: &BoundValue, b: &BoundValue) -> BoundValue {
    if let BoundValue::Domain { .. } = a {
        a.clone()
    } else {
        b.clone()
    }
}

/// The index sets for the chain summand of size `l`: initial segments of
/// sizes `2, 3, ..., l, l`.
pub fn chain_nsets(l: usize) -> Vec<Vec<usize>> {
    let mut sizes: Vec<usize> = (2..=l).collect();
    sizes.push(l);
    sizes.into_iter().map(|k| (1..=k).collect()).collect()
}

/// Case-split disk bound assembled from [`bound_pcfew`]:
/// `1`, `1 + C(2)`, `ρ = 1 + C(2) + C(2)C(3)`, or `ρ + Σ_{l=3}^s C((2,3,...,3), sets(l), r^l)`
/// for `s = 0, 1, 2, ≥ 3`, where `C(m) = bound_pcfew(p, (m), ({1}), (r))`.
pub fn bound_cx_chain(p: Prime, s: u64, r: &Q) -> Result<BoundValue> {
    check_r(r)?;
    let one = BoundValue::exact(BigInt::one());
    if s == 0 {
        return Ok(one);
    }
    let c2 = bound_pcfew(p, &[2], &[vec![1]], std::slice::from_ref(r))?;
    let first = add_values(&one, &c2);
    if s == 1 {
        return Ok(first);
    }
    let c3 = bound_pcfew(p, &[3], &[vec![1]], std::slice::from_ref(r))?;
    let mut acc = add_values(&first, &mul_values(&c2, &c3));
    for l in 3..=s as usize {
        let mut m = vec![3u64; l];
        m[0] = 2;
        let term = bound_pcfew(p, &m, &chain_nsets(l), &vec![r.clone(); l])?;
        acc = add_values(&acc, &term);
    }
    Ok(acc)
}

/// One comparison of an actual count against a bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub label: String,
    pub formula: String,
    pub empirical: u64,
    pub bound: BoundValue,
    pub pass: bool,
}

impl BoundRow {
    fn new(label: &str, formula: &str, empirical: u64, bound: BoundValue) -> Self {
        let pass = bound.admits(empirical);
        BoundRow {
            label: label.into(),
            formula: formula.into(),
            empirical,
            bound,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub id: String,
    pub s: u64,
    pub p: Prime,
    #[serde(with = "serde_q")]
    pub r: Q,
    pub degree: u64,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn violations(&self) -> Vec<&BoundRow> {
        self.rows.iter().filter(|r| !r.pass).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// Aligned columns, one row per bound.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}  s={} p={} r={} deg={}\n",
            self.id,
            self.s,
            self.p,
            fmt_rational(&self.r),
            self.degree
        );
        for row in &self.rows {
            out.push_str(&format!(
                "  {:<22} {:>8} <= {:<24} {}\n",
                row.label,
                row.empirical,
                row.bound.to_string(),
                if row.pass { "ok" } else { "VIOLATION" }
            ));
        }
        out
    }
}

/// Counts the roots of the circuit's polynomial and checks every bound against them.
pub fn verify_report(c: &AdditiveCircuit, p: Prime, r: &Q, cap: DegreeCap) -> Result<BoundReport> {
    check_r(r)?;
    let f = circuit_expand(c, cap)?;
    verify_poly(&f, c.s as u64, p, r, "circuit")
}

/// As [`verify_report`] for a polynomial with a known upper bound `s` on σ.
pub fn verify_poly(f: &SparsePoly, s: u64, p: Prime, r: &Q, id: &str) -> Result<BoundReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let vals = distinct_valuation_count(f, p)? as u64;
    let qp = count_roots_qp(f, p)?;
    let rat = rational_roots(f)?.len() as u64;
    let disk = count_roots_in_disk_with(f, p, r, Multiplicity::Distinct)?;
    let rows = vec![
        BoundRow::new("distinct valuations", "s(s+1)/2", vals, BoundValue::exact(bound_np(s))),
        BoundRow::new("Q_p roots", "1+(p-1)s^2(15/2)^s s! N_p(s)", qp, bound_qp(p, s)),
        BoundRow::new("rational roots", "1+s^3(s+1)(15/2)^s s!", rat, bound_rational(s)),
        BoundRow::new(
            "rational roots (p=2)",
            "1+s^3(s+1)/2 (15/2)^s s!",
            rat,
            bound_rational_composed(s),
        ),
        BoundRow::new(
            "disk roots",
            "s^2 s! (3+(3/r)log_p(2/(r ln p)))^s",
            disk,
            bound_cx(p, s, r)?,
        ),
        BoundRow::new("disk roots (chain)", "case split over C_p", disk, bound_cx_chain(p, s, r)?),
    ];
    Ok(BoundReport {
        id: id.into(),
        s,
        p,
        r: r.clone(),
        degree: f.degree().unwrap_or(0),
        rows,
    })
}

/// Integral roots against a τ value, with the exponent `κ` that would make
/// `#roots = (τ+1)^κ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauRatio {
    pub tau: u64,
    /// `tau` is only an upper bound on τ(f), from a constructive program.
    pub tau_is_upper_bound: bool,
    pub integral_roots: u64,
    pub implied_exponent: Option<f64>,
    /// Set when `implied_exponent` is only a lower bound on the true ratio.
    pub exponent_is_lower_bound: bool,
}

pub fn tau_ratio(f: &SparsePoly, tau: u64, tau_is_upper_bound: bool) -> Result<TauRatio> {
    if tau == 0 {
        return Err(Error::invalid("tau must be at least 1"));
    }
    let roots = rational_roots(f)?.iter().filter(|x| x.is_integer()).count() as u64;
    let implied = (roots >= 1).then(|| (roots as f64).ln() / ((tau + 1) as f64).ln());
    Ok(TauRatio {
        tau,
        tau_is_upper_bound,
        integral_roots: roots,
        implied_exponent: implied,
        exponent_is_lower_bound: tau_is_upper_bound && implied.is_some(),
    })
}

/// `x` rounded to the nearest `f64`, for display.
pub fn approx(x: &Q) -> f64 {
    let (n, d) = (x.numer().to_f64().unwrap_or(f64::NAN), x.denom().to_f64().unwrap_or(f64::NAN));
    n / d
}
