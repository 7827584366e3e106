//! p-adic Newton polygons, valuation profiles and root counts.

mod hensel;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{ord_rat, Prime};
use crate::poly::{squarefree_part, SparsePoly};
use crate::rational::{fmt_rational, parse_rational, Q};

pub use hensel::{count_roots_qp, count_roots_zp};

/// A vertex `(a, v)`: exponent and coefficient valuation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HullPoint {
    pub a: u64,
    pub v: Q,
}

impl HullPoint {
    pub fn new(a: u64, v: Q) -> Self {
        HullPoint { a, v }
    }
}

impl fmt::Display for HullPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, fmt_rational(&self.v))
    }
}

/// Lower convex hull, vertices sorted by strictly increasing `a`, with
/// strictly increasing edge slopes. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LowerHull {
    vertices: Vec<HullPoint>,
}

/// One lower edge: slope and horizontal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub slope: Q,
    pub length: u64,
}

/// The minimizing face for an inner normal `(v, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Face {
    Vertex(HullPoint),
    Edge(HullPoint, HullPoint),
}

fn ua(a: u64) -> Q {
    Q::from_integer(BigInt::from(a))
}

impl LowerHull {
    /// Lower hull of a nonempty point set; duplicate `a` keep the lowest `v`.
    pub fn from_points<I: IntoIterator<Item = HullPoint>>(points: I) -> Result<Self> {
        let mut best: BTreeMap<u64, Q> = BTreeMap::new();
        for p in points {
            best.entry(p.a)
                .and_modify(|v| {
                    if p.v < *v {
                        *v = p.v.clone();
                    }
                })
                .or_insert(p.v);
        }
        if best.is_empty() {
            return Err(Error::invalid("hull of an empty point set"));
        }
        let mut hull: Vec<HullPoint> = Vec::with_capacity(best.len());
        for (a, v) in best {
            let c = HullPoint { a, v };
            while hull.len() >= 2 {
                let o = &hull[hull.len() - 2];
                let b = &hull[hull.len() - 1];
                // Keep b only for a strict left turn o -> b -> c.
                let cross = ua(b.a - o.a) * (&c.v - &o.v) - (&b.v - &o.v) * ua(c.a - o.a);
                if cross.is_positive() {
                    break;
                }
                hull.pop();
            }
            hull.push(c);
        }
        Ok(LowerHull { vertices: hull })
    }

    pub fn point(a: u64, v: Q) -> Self {
        LowerHull {
            vertices: vec![HullPoint { a, v }],
        }
    }

    pub fn vertices(&self) -> &[HullPoint] {
        &self.vertices
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.vertices
            .windows(2)
            .map(|w| Edge {
                slope: (&w[1].v - &w[0].v) / ua(w[1].a - w[0].a),
                length: w[1].a - w[0].a,
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    /// `k` copies of the hull added together (`k = 0` gives the origin).
    pub fn scale(&self, k: u64) -> Self {
        if k == 0 {
            return Self::point(0, Q::zero());
        }
        let kq = ua(k);
        LowerHull {
            vertices: self
                .vertices
                .iter()
                .map(|p| HullPoint::new(p.a * k, &p.v * &kq))
                .collect(),
        }
    }

    pub fn translate(&self, da: u64, dv: &Q) -> Self {
        LowerHull {
            vertices: self
                .vertices
                .iter()
                .map(|p| HullPoint::new(p.a + da, &p.v + dv))
                .collect(),
        }
    }

    /// Height of the hull above `a`, if `a` lies in its horizontal range.
    pub fn height_at(&self, a: u64) -> Option<Q> {
        let first = self.vertices.first()?;
        let last = self.vertices.last()?;
        if a < first.a || a > last.a {
            return None;
        }
        let i = self.vertices.partition_point(|p| p.a < a);
        let right = &self.vertices[i];
        if right.a == a {
            return Some(right.v.clone());
        }
        let left = &self.vertices[i - 1];
        let t = ua(a - left.a) / ua(right.a - left.a);
        Some(&left.v + (&right.v - &left.v) * t)
    }

    /// Whether `(a, v)` lies in the hull's range and on or above it.
    pub fn on_or_above(&self, a: u64, v: &Q) -> bool {
        self.height_at(a).is_some_and(|h| *v >= h)
    }
}

impl fmt::Display for LowerHull {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl Serialize for LowerHull {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.vertices.len()))?;
        for p in &self.vertices {
            seq.serialize_element(&(p.a, fmt_rational(&p.v)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LowerHull {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<(u64, String)> = Vec::deserialize(d)?;
        let mut pts = Vec::with_capacity(raw.len());
        for (a, v) in raw {
            pts.push(HullPoint::new(a, parse_rational(&v).map_err(de::Error::custom)?));
        }
        let hull = LowerHull::from_points(pts.clone()).map_err(de::Error::custom)?;
        if hull.vertices != pts {
            return Err(de::Error::custom("vertex list is not a canonical lower hull"));
        }
        Ok(hull)
    }
}

/// Lower hull of `{(a, ord_p c_a)}`.
pub fn newton_polygon(f: &SparsePoly, p: Prime) -> Result<LowerHull> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    LowerHull::from_points(f.terms().map(|(a, c)| {
        let v = ord_rat(c, p).finite().expect("nonzero coefficient").clone();
        HullPoint::new(a, v)
    }))
}

/// The face of `h` minimizing `v*a + w` over its points.
pub fn face(h: &LowerHull, v: &Q) -> Face {
    let score = |p: &HullPoint| v * ua(p.a) + &p.v;
    let scores: Vec<Q> = h.vertices.iter().map(score).collect();
    let min = scores.iter().min().expect("hull is nonempty");
    let first = scores.iter().position(|s| s == min).unwrap();
    let last = scores.iter().rposition(|s| s == min).unwrap();
    if first == last {
        Face::Vertex(h.vertices[first].clone())
    } else {
        Face::Edge(h.vertices[first].clone(), h.vertices[last].clone())
    }
}

/// Lower hull of the Minkowski sum, by merging the edge sequences.
pub fn minkowski_sum(h1: &LowerHull, h2: &LowerHull) -> LowerHull {
    let mut edges: Vec<Edge> = h1.edges();
    edges.extend(h2.edges());
    edges.sort_by(|x, y| x.slope.cmp(&y.slope));
    let start = HullPoint::new(
        h1.vertices[0].a + h2.vertices[0].a,
        &h1.vertices[0].v + &h2.vertices[0].v,
    );
    let mut vertices = vec![start];
    let mut i = 0;
    while i < edges.len() {
        let slope = edges[i].slope.clone();
        let mut len = 0u64;
        while i < edges.len() && edges[i].slope == slope {
            len += edges[i].length;
            i += 1;
        }
        let last = vertices.last().unwrap();
        let next = HullPoint::new(last.a + len, &last.v + &slope * ua(len));
        vertices.push(next);
    }
    LowerHull { vertices }
}

/// Lower hull of the union of the two vertex sets.
pub fn hull_union(h1: &LowerHull, h2: &LowerHull) -> LowerHull {
    LowerHull::from_points(h1.vertices.iter().chain(&h2.vertices).cloned())
        .expect("union of nonempty hulls")
}

/// Set of lower edge slopes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SlopeSet(pub BTreeSet<Q>);

impl SlopeSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &SlopeSet) -> SlopeSet {
        SlopeSet(self.0.union(&other.0).cloned().collect())
    }
}

impl Serialize for SlopeSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(fmt_rational))
    }
}

impl<'de> Deserialize<'de> for SlopeSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(de::Error::custom))
            .collect::<std::result::Result<_, _>>()
            .map(SlopeSet)
    }
}

pub fn slope_set(h: &LowerHull) -> SlopeSet {
    SlopeSet(h.edges().into_iter().map(|e| e.slope).collect())
}

/// Valuation of nonzero roots in ℂ_p ↦ number of roots with that valuation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValuationProfile {
    pub entries: BTreeMap<Q, u64>,
}

impl ValuationProfile {
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn get(&self, v: &Q) -> u64 {
        self.entries.get(v).copied().unwrap_or(0)
    }
}

impl Serialize for ValuationProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(|(v, m)| (fmt_rational(v), *m)))
    }
}

impl<'de> Deserialize<'de> for ValuationProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<(String, u64)> = Vec::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for (v, m) in raw {
            if m == 0 {
                return Err(de::Error::custom("zero multiplicity"));
            }
            let v = parse_rational(&v).map_err(de::Error::custom)?;
            if entries.insert(v, m).is_some() {
                return Err(de::Error::custom("duplicate valuation"));
            }
        }
        Ok(ValuationProfile { entries })
    }
}

impl fmt::Display for ValuationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, m)) in self.entries.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}->{}", fmt_rational(v), m)?;
        }
        f.write_str("}")
    }
}

fn profile_of_hull(h: &LowerHull) -> ValuationProfile {
    let mut entries = BTreeMap::new();
    for e in h.edges() {
        *entries.entry(-e.slope).or_insert(0) += e.length;
    }
    ValuationProfile { entries }
}

/// Each lower edge of slope `-v` and length `l` contributes `v ↦ l`.
pub fn valuation_profile(f: &SparsePoly, p: Prime) -> Result<ValuationProfile> {
    let (g, _) = f.strip_zero_root()?;
    Ok(profile_of_hull(&newton_polygon(&g, p)?))
}

/// Number of distinct p-adic norms among the nonzero roots.
pub fn distinct_valuation_count(f: &SparsePoly, p: Prime) -> Result<usize> {
    let (g, _) = f.strip_zero_root()?;
    Ok(newton_polygon(&g, p)?.edge_count())
}

/// How disk counts treat repeated roots.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicity {
    #[default]
    Distinct,
    Counted,
}

/// Roots `x` in ℂ_p with `ord_p(x - 1) >= r`, distinct.
pub fn count_roots_in_disk(f: &SparsePoly, p: Prime, r: &Q) -> Result<u64> {
    count_roots_in_disk_with(f, p, r, Multiplicity::Distinct)
}

pub fn count_roots_in_disk_with(
    f: &SparsePoly,
    p: Prime,
    r: &Q,
    mode: Multiplicity,
) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !r.is_positive() {
        return Err(Error::invalid("disk radius exponent must be positive"));
    }
    let base = match mode {
        Multiplicity::Distinct => squarefree_part(f)?,
        Multiplicity::Counted => f.clone(),
    };
    let h = base.shift(&Q::from_integer(BigInt::from(1)));
    let (g, at_one) = h.strip_zero_root()?;
    let near: u64 = valuation_profile(&g, p)?
        .entries
        .iter()
        .filter(|(v, _)| *v >= r)
        .map(|(_, m)| *m)
        .sum();
    Ok(at_one + near)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn pr(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn hp(a: u64, v: i64) -> HullPoint {
        HullPoint::new(a, q(v))
    }

    fn poly(s: &str) -> SparsePoly {
        s.parse().unwrap()
    }

    #[test]
    fn polygons() {
        let h = newton_polygon(&poly("x^2-6*x+8"), pr(2)).unwrap();
        assert_eq!(h.vertices(), &[hp(0, 3), hp(1, 1), hp(2, 0)]);
        let h = newton_polygon(&poly("x-1"), pr(7)).unwrap();
        assert_eq!(h.vertices(), &[hp(0, 0), hp(1, 0)]);
        let h = newton_polygon(&poly("x^3-7*x^2+14*x-8"), pr(2)).unwrap();
        assert_eq!(h.vertices(), &[hp(0, 3), hp(1, 1), hp(2, 0), hp(3, 0)]);
        assert!(matches!(
            newton_polygon(&SparsePoly::zero(), pr(2)),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn collinear_points_merge() {
        let h = LowerHull::from_points([hp(0, 0), hp(1, 1), hp(2, 2), hp(3, 5)]).unwrap();
        assert_eq!(h.vertices(), &[hp(0, 0), hp(2, 2), hp(3, 5)]);
    }

    #[test]
    fn faces() {
        let h = newton_polygon(&poly("x^2-6*x+8"), pr(2)).unwrap();
        assert_eq!(face(&h, &q(1)), Face::Edge(hp(1, 1), hp(2, 0)));
        assert_eq!(face(&h, &q(3)), Face::Vertex(hp(0, 3)));
        let l = newton_polygon(&poly("x-1"), pr(2)).unwrap();
        assert_eq!(face(&l, &q(0)), Face::Edge(hp(0, 0), hp(1, 0)));
    }

    #[test]
    fn profiles() {
        let p2 = pr(2);
        let prof = valuation_profile(&poly("x^2-6*x+8"), p2).unwrap();
        assert_eq!(prof.entries, BTreeMap::from([(q(2), 1), (q(1), 1)]));
        let prof = valuation_profile(&poly("(x+1)^4-1"), p2).unwrap();
        assert_eq!(prof.entries, BTreeMap::from([(q(1), 1), (q_frac(1, 2), 2)]));
        let prof = valuation_profile(&poly("x^3-7*x^2+14*x-8"), p2).unwrap();
        assert_eq!(prof.entries, BTreeMap::from([(q(2), 1), (q(1), 1), (q(0), 1)]));
        assert_eq!(distinct_valuation_count(&poly("x^3-7*x^2+14*x-8"), p2).unwrap(), 3);
        assert_eq!(distinct_valuation_count(&poly("x^9"), p2).unwrap(), 0);
        assert_eq!(distinct_valuation_count(&poly("x^2-6*x+8"), p2).unwrap(), 2);
    }

    #[test]
    fn sums_and_unions() {
        let p2 = pr(2);
        let a = newton_polygon(&poly("x-2"), p2).unwrap();
        let b = newton_polygon(&poly("x-4"), p2).unwrap();
        let s = minkowski_sum(&a, &b);
        assert_eq!(s.vertices(), &[hp(0, 3), hp(1, 1), hp(2, 0)]);
        assert_eq!(slope_set(&s), SlopeSet([q(-2), q(-1)].into()));
        let one = newton_polygon(&poly("1"), p2).unwrap();
        assert_eq!(minkowski_sum(&s, &one), s);
        let l = newton_polygon(&poly("x-1"), p2).unwrap();
        assert_eq!(minkowski_sum(&l, &l).vertices(), &[hp(0, 0), hp(2, 0)]);

        let x2 = newton_polygon(&poly("x^2"), p2).unwrap();
        let four = newton_polygon(&poly("4"), p2).unwrap();
        assert_eq!(hull_union(&x2, &four).vertices(), &[hp(0, 2), hp(2, 0)]);
        assert_eq!(hull_union(&s, &s), s);
        let x = newton_polygon(&poly("x"), p2).unwrap();
        assert_eq!(hull_union(&x, &one).vertices(), &[hp(0, 0), hp(1, 0)]);
        assert!(slope_set(&LowerHull::point(3, q(1))).is_empty());
    }

    #[test]
    fn disk_counts() {
        let p2 = pr(2);
        let f = poly("(x-1)*(x-5)*(x-3)");
        assert_eq!(count_roots_in_disk(&f, p2, &q(1)).unwrap(), 3);
        assert_eq!(count_roots_in_disk(&f, p2, &q(2)).unwrap(), 2);
        assert_eq!(count_roots_in_disk(&poly("x-7"), p2, &q(1)).unwrap(), 1);
        let g = poly("(x-1)^3*(x-3)");
        assert_eq!(count_roots_in_disk(&g, p2, &q(1)).unwrap(), 2);
        assert_eq!(
            count_roots_in_disk_with(&g, p2, &q(1), Multiplicity::Counted).unwrap(),
            4
        );
        assert!(count_roots_in_disk(&g, p2, &q(0)).is_err());
        assert_eq!(count_roots_in_disk(&poly("(x+1)^4-1"), p2, &q(1)).unwrap(), 0);
    }

    #[test]
    fn json_forms() {
        let h = newton_polygon(&poly("x^3+4*x^2+6*x+4"), pr(2)).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"[[0,"2"],[1,"1"],[3,"0"]]"#);
        assert_eq!(serde_json::from_str::<LowerHull>(&s).unwrap(), h);
        assert!(serde_json::from_str::<LowerHull>(r#"[[0,"0"],[1,"1"],[2,"2"]]"#).is_err());
        let prof = profile_of_hull(&h);
        let s = serde_json::to_string(&prof).unwrap();
        assert_eq!(s, r#"[["1/2",2],["1",1]]"#);
        assert_eq!(serde_json::from_str::<ValuationProfile>(&s).unwrap(), prof);
    }

    #[test]
    fn on_or_above() {
        let h = LowerHull::from_points([hp(0, 2), hp(2, 0)]).unwrap();
        assert!(h.on_or_above(1, &q(1)));
        assert!(!h.on_or_above(1, &q_frac(1, 2)));
        assert!(!h.on_or_above(3, &q(10)));
    }
}
