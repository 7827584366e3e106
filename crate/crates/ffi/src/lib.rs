//! C ABI over `sigmatau`.
//!
//! Every function returns an [`StStatus`]; on failure a message is available
//! from [`st_last_error`] on the same thread. Objects are opaque handles owned
//! by the caller and released with their `_free` function. Strings returned
//! through out-parameters are released with [`st_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use sigmatau::bounds::verify_report;
use sigmatau::circuit::{circuit_expand, AdditiveCircuit};
use sigmatau::newton::{count_roots_in_disk, count_roots_qp, count_roots_zp, distinct_valuation_count, newton_polygon};
use sigmatau::padic::Prime;
use sigmatau::poly::{parse_poly, DegreeCap, SparsePoly};
use sigmatau::rational::Q;
use sigmatau::search::{random_circuit, CircuitBounds};
use sigmatau::Error;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Malformed polynomial, circuit or number text.
    Parse = 2,
    InvalidArgument = 3,
    DegreeCap = 4,
    ZeroPolynomial = 5,
    /// An internal certificate failed; always a bug.
    Internal = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// Polynomial with rational coefficients.
pub struct StPoly(SparsePoly);

/// Additive-complexity circuit.
pub struct StCircuit(AdditiveCircuit);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> StStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) | Error::MalformedCircuit(_) | Error::MalformedSlp(_) => StStatus::Parse,
        Error::DegreeCap { .. } => StStatus::DegreeCap,
        Error::ZeroPolynomial => StStatus::ZeroPolynomial,
        Error::Internal(_) => StStatus::Internal,
        _ => StStatus::InvalidArgument,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> StStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer passed for {what}"));
            StStatus::NullArgument
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside sigmatau".into());
            StStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::InvalidArgument(format!("{what} is not UTF-8"))))
}

fn prime(p: u64) -> Result<Prime, Fail> {
    Ok(Prime::new(p)?)
}

fn rational(num: i64, den: i64) -> Result<Q, Fail> {
    if den == 0 {
        return Err(Fail::Lib(Error::InvalidArgument("zero denominator".into())));
    }
    Ok(Q::new(BigInt::from(num), BigInt::from(den)))
}

fn give_string(s: String, dst: *mut *mut c_char) -> Result<(), Fail> {
    let dst = unsafe { out(dst, "out")? };
    *dst = CString::new(s).expect("library output has no nul bytes").into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn st_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn st_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a polynomial such as `"x^2 - 6*x + 8"`.
///
/// # Safety
/// `src` must be a nul-terminated string; `out_poly` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_poly_parse(src: *const c_char, degree_cap: u64, out_poly: *mut *mut StPoly) -> StStatus {
    guard(|| {
        let s = text(src, "src")?;
        let dst = out(out_poly, "out_poly")?;
        let f = parse_poly(s, DegreeCap(degree_cap))?;
        *dst = Box::into_raw(Box::new(StPoly(f)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn st_poly_free(p: *mut StPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Canonical text form.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_poly_to_string(p: *const StPoly, out_str: *mut *mut c_char) -> StStatus {
    guard(|| {
        let f = deref(p, "poly")?;
        give_string(f.0.to_string(), out_str)
    })
}

/// Degree; fails with `ZeroPolynomial` for 0.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_poly_degree(p: *const StPoly, out_degree: *mut u64) -> StStatus {
    guard(|| {
        let f = deref(p, "poly")?;
        *out(out_degree, "out_degree")? = f.0.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(())
    })
}

/// Newton polygon as JSON `[[a,"v"],...]`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_newton_polygon_json(p: *const StPoly, prime_p: u64, out_json: *mut *mut c_char) -> StStatus {
    guard(|| {
        let f = deref(p, "poly")?;
        let h = newton_polygon(&f.0, prime(prime_p)?)?;
        give_string(serde_json::to_string(&h).map_err(Error::from)?, out_json)
    })
}

/// Number of distinct valuations of nonzero roots over ℂ_p.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_distinct_valuations(p: *const StPoly, prime_p: u64, out_count: *mut u64) -> StStatus {
    guard(|| {
        let f = deref(p, "poly")?;
        *out(out_count, "out_count")? = distinct_valuation_count(&f.0, prime(prime_p)?)? as u64;
        Ok(())
    })
}

/// Distinct roots in ℤ_p.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_count_roots_zp(p: *const StPoly, prime_p: u64, out_count: *mut u64) -> StStatus {
    guard(|| {
        let f = deref(p, "poly")?;
        *out(out_count, "out_count")? = count_roots_zp(&f.0, prime(prime_p)?)?;
        Ok(())
    })
}

/// Distinct roots in ℚ_p.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_count_roots_qp(p: *const StPoly, prime_p: u64, out_count: *mut u64) -> StStatus {
    guard(|| {
        let f = deref(p, "poly")?;
        *out(out_count, "out_count")? = count_roots_qp(&f.0, prime(prime_p)?)?;
        Ok(())
    })
}

/// Distinct roots `x` in ℂ_p with `ord_p(x - 1) ≥ r_num / r_den`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_count_roots_in_disk(
    p: *const StPoly,
    prime_p: u64,
    r_num: i64,
    r_den: i64,
    out_count: *mut u64,
) -> StStatus {
    guard(|| {
        let f = deref(p, "poly")?;
        let r = rational(r_num, r_den)?;
        *out(out_count, "out_count")? = count_roots_in_disk(&f.0, prime(prime_p)?, &r)?;
        Ok(())
    })
}

/// Parses a circuit from its JSON form.
///
/// # Safety
/// `json` must be nul-terminated; `out_circuit` valid.
#[no_mangle]
pub unsafe extern "C" fn st_circuit_from_json(json: *const c_char, out_circuit: *mut *mut StCircuit) -> StStatus {
    guard(|| {
        let s = text(json, "json")?;
        let dst = out(out_circuit, "out_circuit")?;
        *dst = Box::into_raw(Box::new(StCircuit(AdditiveCircuit::from_json(s)?)));
        Ok(())
    })
}

/// Seeded random circuit with `s` gates (exponents ≤ `max_exp`, `|constants|` ≤ `max_const`).
///
/// # Safety
/// `out_circuit` must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_random_circuit(
    s: u32,
    seed: u64,
    max_exp: u64,
    max_const: i64,
    out_circuit: *mut *mut StCircuit,
) -> StStatus {
    guard(|| {
        let dst = out(out_circuit, "out_circuit")?;
        let b = CircuitBounds {
            max_exp,
            max_const,
            ..CircuitBounds::default()
        };
        *dst = Box::into_raw(Box::new(StCircuit(random_circuit(s as usize, seed, b))));
        Ok(())
    })
}

/// # Safety
/// `c` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn st_circuit_free(c: *mut StCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// JSON form of a circuit.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_circuit_to_json(c: *const StCircuit, out_json: *mut *mut c_char) -> StStatus {
    guard(|| give_string(deref(c, "circuit")?.0.to_json(), out_json))
}

/// The polynomial a circuit computes.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_circuit_expand(c: *const StCircuit, degree_cap: u64, out_poly: *mut *mut StPoly) -> StStatus {
    guard(|| {
        let circ = deref(c, "circuit")?;
        let dst = out(out_poly, "out_poly")?;
        *dst = Box::into_raw(Box::new(StPoly(circuit_expand(&circ.0, DegreeCap(degree_cap))?)));
        Ok(())
    })
}

/// Root counts against every bound, as a JSON report. `*out_all_pass` is 1
/// when no bound is violated.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_verify_report_json(
    c: *const StCircuit,
    prime_p: u64,
    r_num: i64,
    r_den: i64,
    out_json: *mut *mut c_char,
    out_all_pass: *mut i32,
) -> StStatus {
    guard(|| {
        let circ = deref(c, "circuit")?;
        let pass = out(out_all_pass, "out_all_pass")?;
        let rep = verify_report(&circ.0, prime(prime_p)?, &rational(r_num, r_den)?, DegreeCap::DEFAULT)?;
        *pass = i32::from(rep.all_pass());
        give_string(serde_json::to_string(&rep).map_err(Error::from)?, out_json)
    })
}
