//! Counting roots in ℤ_p and ℚ_p by residue refinement.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{ord_int_u64, Prime};
use crate::poly::dense::{self, IntPoly};
use crate::poly::roots::squarefree_dense;
use crate::poly::SparsePoly;

/// Distinct roots of `f` in ℤ_p.
pub fn count_roots_zp(f: &SparsePoly, p: Prime) -> Result<u64> {
    let g = squarefree_dense(f)?;
    zp_count(&g, p, 0, disc_ord(&g, p))
}

/// Distinct roots of `f` in ℚ_p.
///
/// Roots of valuation `>= 0` are the ℤ_p roots of `g`, those of valuation
/// `<= 0` are inverses of ℤ_p roots of the reversal; units are in both.
pub fn count_roots_qp(f: &SparsePoly, p: Prime) -> Result<u64> {
    let mut g = squarefree_dense(f)?;
    let mut zero = 0;
    if g[0].is_zero() {
        zero = 1;
        g.remove(0);
    }
    let mut rev = g.clone();
    rev.reverse();
    // g is primitive with g(0) != 0, so the reversal has the same
    // coefficients, degree and discriminant up to sign.
    let d = disc_ord(&g, p);
    Ok(zero + zp_count(&g, p, 0, d)? + zp_count(&rev, p, 0, d)? - zp_count(&g, p, 1, d)?)
}

/// `ord_p disc(g)`; zero for constants.
fn disc_ord(g: &IntPoly, p: Prime) -> u64 {
    if dense::degree(g).unwrap_or(0) == 0 {
        return 0;
    }
    // disc(g) is an integer for integer g.
    let disc = dense::discriminant(g);
    ord_int_u64(disc.numer(), p).expect("squarefree polynomial has nonzero discriminant")
}

/// ℤ_p roots of a squarefree primitive `g` whose residue mod p is at least
/// `first`, refined at most to depth `2 ord_p disc(g) + 1`.
fn zp_count(g: &IntPoly, p: Prime, first: u64, disc_ord: u64) -> Result<u64> {
    if dense::degree(g).unwrap_or(0) == 0 {
        return Ok(0);
    }
    refine(g, p, first, 1, 2 * disc_ord + 1)
}

fn refine(g: &IntPoly, p: Prime, first: u64, depth: u64, max_depth: u64) -> Result<u64> {
    if depth > max_depth {
        return Err(Error::Internal(format!(
            "Hensel refinement exceeded certified depth {max_depth}"
        )));
    }
    let pb = p.to_bigint();
    let deriv = dense::derivative(g);
    let mut count = 0;
    for r in first..p.get() {
        let rb = BigInt::from(r);
        if !dense::eval(g, &rb).mod_floor(&pb).is_zero() {
            continue;
        }
        if !dense::eval(&deriv, &rb).mod_floor(&pb).is_zero() {
            count += 1;
            continue;
        }
        let h = zoom(g, &rb, &pb, p);
        if dense::degree(&h).unwrap_or(0) > 0 {
            count += refine(&h, p, 0, depth + 1, max_depth)?;
        }
    }
    Ok(count)
}

/// `g(r + p y) / p^m` with `m` the largest power dividing every coefficient.
fn zoom(g: &IntPoly, r: &BigInt, pb: &BigInt, p: Prime) -> IntPoly {
    let mut t = dense::taylor_shift(g, r);
    let mut pi = BigInt::from(1);
    for c in t.iter_mut() {
        *c *= &pi;
        pi *= pb;
    }
    let m = t
        .iter()
        .filter_map(|c| ord_int_u64(c, p))
        .min()
        .unwrap_or(0);
    let div = num_traits::pow(pb.clone(), m as usize);
    dense::trim(t.into_iter().map(|c| c / &div).collect())
}
