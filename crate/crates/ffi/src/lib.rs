//! C ABI over `conformal-core`.
//!
//! Operators live behind the opaque [`ConformalOperator`] handle. Every
//! function returns a [`ConformalStatus`] and writes results through out
//! pointers; on failure [`conformal_last_error_message`] describes the cause.
//! Strings handed out by this library are released with
//! [`conformal_string_free`], handles with [`conformal_operator_free`].
//!
//! Weights are passed as exact rational strings (`"p/q"` or `"p"`).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conformal_core::bilinear::verify_invariance;
use conformal_core::rational::{format_rational, parse_rational};
use conformal_core::transvectant::transvectant_coefficients;
use conformal_core::{BilinearOperator, Error, Signature, Weight};

/// Status codes; the nonzero values shared with the command-line tool keep
/// their meaning there.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConformalStatus {
    Ok = 0,
    Parse = 2,
    Resonant = 3,
    NotInvariant = 4,
    Io = 6,
    NullPointer = 7,
    Panic = 8,
}

/// An invariant-operator candidate: weights, signature and coefficient table.
pub struct ConformalOperator {
    inner: BilinearOperator,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> ConformalStatus {
    match err {
        Error::ResonantWeight { .. } => ConformalStatus::Resonant,
        Error::InconsistentSystem(_) => ConformalStatus::NotInvariant,
        Error::Io(_) => ConformalStatus::Io,
        _ => ConformalStatus::Parse,
    }
}

struct Failure(ConformalStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

/// Runs `body`, recording any failure or panic for
/// [`conformal_last_error_message`].
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> ConformalStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ConformalStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ConformalStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(ConformalStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `ptr` is null or a nul-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| Failure(ConformalStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn read_weight(ptr: *const c_char, what: &str) -> Result<Weight, Failure> {
    Ok(Weight(parse_rational(read_str(ptr, what)?)?))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).expect("library strings have no interior nul").into_raw()
}

unsafe fn handle<'a>(op: *const ConformalOperator) -> Result<&'a ConformalOperator, Failure> {
    op.as_ref().ok_or_else(|| null("operator"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Builds `B_2k` for signature `(p,q)` with `c_{0,k,0} = 1`.
///
/// # Safety
/// `lambda` and `mu` are nul-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn conformal_operator_construct(
    p: u32,
    q: u32,
    k: u32,
    lambda: *const c_char,
    mu: *const c_char,
    out: *mut *mut ConformalOperator,
) -> ConformalStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let sig = Signature::new(p as usize, q as usize)?;
        let inner =
            BilinearOperator::construct(sig, k as usize, read_weight(lambda, "lambda")?, read_weight(mu, "mu")?)?;
        write(out, Box::into_raw(Box::new(ConformalOperator { inner })), "out")
    })
}

/// Parses an operator document as written by
/// [`conformal_operator_to_json`].
///
/// # Safety
/// `json` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn conformal_operator_from_json(
    json: *const c_char,
    out: *mut *mut ConformalOperator,
) -> ConformalStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = BilinearOperator::from_json(read_str(json, "json")?)?;
        write(out, Box::into_raw(Box::new(ConformalOperator { inner })), "out")
    })
}

/// # Safety
/// `op` is a live handle; `out` is writable. Free the string with
/// [`conformal_string_free`].
#[no_mangle]
pub unsafe extern "C" fn conformal_operator_to_json(
    op: *const ConformalOperator,
    out: *mut *mut c_char,
) -> ConformalStatus {
    guard(|| {
        let op = handle(op)?;
        if out.is_null() {
            return Err(null("out"));
        }
        write(out, to_c(op.inner.to_json()), "out")
    })
}

/// Writes the homogeneity level `k`.
///
/// # Safety
/// `op` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn conformal_operator_k(op: *const ConformalOperator, out: *mut u32) -> ConformalStatus {
    guard(|| write(out, handle(op)?.inner.k() as u32, "out"))
}

/// Writes `c_{r,s,t}` as a rational string; zero off the table's level.
///
/// # Safety
/// `op` is a live handle; `out` is writable. Free the string with
/// [`conformal_string_free`].
#[no_mangle]
pub unsafe extern "C" fn conformal_operator_coefficient(
    op: *const ConformalOperator,
    r: u32,
    s: u32,
    t: u32,
    out: *mut *mut c_char,
) -> ConformalStatus {
    guard(|| {
        let op = handle(op)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = op.inner.table.get(r as usize, s as usize, t as usize);
        write(out, to_c(format_rational(&c)), "out")
    })
}

/// Applies every conformal generator to the symbol. Returns
/// `CONFORMAL_STATUS_OK` when all residuals vanish and
/// `CONFORMAL_STATUS_NOT_INVARIANT` otherwise.
///
/// # Safety
/// `op` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn conformal_operator_verify(op: *const ConformalOperator) -> ConformalStatus {
    guard(|| {
        let report = verify_invariance(&handle(op)?.inner)?;
        let first = report.nonzero().next().map(|r| format!("{} leaves residual {}", r.generator, r.residual));
        match first {
            None => Ok(()),
            Some(msg) => Err(Failure(ConformalStatus::NotInvariant, msg)),
        }
    })
}

/// # Safety
/// `op` is null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn conformal_operator_free(op: *mut ConformalOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Coefficients of the `k`-th one-dimensional transvectant as a JSON array
/// of rational strings; entry `i` multiplies `f^(i) g^(k-i)`.
///
/// # Safety
/// `lambda` and `mu` are nul-terminated strings; `out` is writable. Free the
/// string with [`conformal_string_free`].
#[no_mangle]
pub unsafe extern "C" fn conformal_transvectant_json(
    k: u32,
    lambda: *const c_char,
    mu: *const c_char,
    out: *mut *mut c_char,
) -> ConformalStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let coefficients =
            transvectant_coefficients(k as usize, &read_weight(lambda, "lambda")?, &read_weight(mu, "mu")?);
        let quoted: Vec<String> = coefficients.iter().map(|c| format!("\"{}\"", format_rational(c))).collect();
        write(out, to_c(format!("[{}]", quoted.join(", "))), "out")
    })
}

/// Message for the last failure on this thread, or null if the last call
/// succeeded. Free with [`conformal_string_free`].
#[no_mangle]
pub extern "C" fn conformal_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn conformal_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
