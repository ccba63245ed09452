//! C interface: opaque field and S handles, unit-equation bounds, and the CLI
//! entry point. Every function returns an [`EbStatus`]; on failure the message
//! is available from [`eb_last_error`] until the next call on the same thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use effbounds::bounds::{best_unit_bound, BoundInputs};
use effbounds::cli::instance::parse_field;
use effbounds::forms::parse::parse_element;
use effbounds::heights::{big_h, s_regulator, SSpec};
use effbounds::{Error, FieldProfile};

const PREC: u32 = 128;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EbStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed input or an argument outside the domain of the computation.
    Invalid = 3,
    /// A checked inequality failed.
    Violation = 4,
    Panic = 5,
}

/// A number field: ℚ or ℚ(√D).
pub struct EbField(FieldProfile);

/// A finite set of places of a field, infinite places included.
pub struct EbSSpec(SSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Fail {
    Null(&'static str),
    Utf8(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EbStatus {
    set_error(String::new());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EbStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("{what} is null"));
            EbStatus::NullArgument
        }
        Ok(Err(Fail::Utf8(what))) => {
            set_error(format!("{what} is not valid UTF-8"));
            EbStatus::InvalidUtf8
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(format!("{}: {e}", e.name()));
            if e.is_violation() {
                EbStatus::Violation
            } else {
                EbStatus::Invalid
            }
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            EbStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call.
#[no_mangle]
pub extern "C" fn eb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn eb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `name` is `Q`, `Q(i)`, `Q(sqrt(D))` or `quadratic:D`.
#[no_mangle]
pub unsafe extern "C" fn eb_field_new(name: *const c_char, field: *mut *mut EbField) -> EbStatus {
    guard(|| {
        let slot = out(field, "field")?;
        *slot = ptr::null_mut();
        let k = parse_field(text(name, "name")?)?;
        *slot = Box::into_raw(Box::new(EbField(k)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn eb_field_free(field: *mut EbField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

#[no_mangle]
pub unsafe extern "C" fn eb_field_invariants(
    field: *const EbField,
    degree: *mut u32,
    discriminant: *mut i64,
    class_number: *mut u64,
) -> EbStatus {
    guard(|| {
        let k = &handle(field, "field")?.0;
        *out(degree, "degree")? = k.degree;
        *out(discriminant, "discriminant")? = k.discriminant;
        *out(class_number, "class_number")? = k.class_number;
        Ok(())
    })
}

/// Enclosure of the regulator `R_K`.
#[no_mangle]
pub unsafe extern "C" fn eb_field_regulator(field: *const EbField, lo: *mut f64, hi: *mut f64) -> EbStatus {
    guard(|| {
        let r = handle(field, "field")?.0.regulator(PREC);
        *out(lo, "lo")? = r.lo_f64();
        *out(hi, "hi")? = r.hi_f64();
        Ok(())
    })
}

/// `S` made of the infinite places and every prime above the given rational primes.
#[no_mangle]
pub unsafe extern "C" fn eb_sspec_new(
    field: *const EbField,
    primes: *const u64,
    len: usize,
    sspec: *mut *mut EbSSpec,
) -> EbStatus {
    guard(|| {
        let slot = out(sspec, "sspec")?;
        *slot = ptr::null_mut();
        let k = &handle(field, "field")?.0;
        let ps: &[u64] = if len == 0 {
            &[]
        } else if primes.is_null() {
            return Err(Fail::Null("primes"));
        } else {
            std::slice::from_raw_parts(primes, len)
        };
        *slot = Box::into_raw(Box::new(EbSSpec(SSpec::from_primes(k, ps)?)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn eb_sspec_free(sspec: *mut EbSSpec) {
    if !sspec.is_null() {
        drop(Box::from_raw(sspec));
    }
}

/// Number of places in `S`.
#[no_mangle]
pub unsafe extern "C" fn eb_sspec_size(sspec: *const EbSSpec, size: *mut usize) -> EbStatus {
    guard(|| {
        *out(size, "size")? = handle(sspec, "sspec")?.0.places().len();
        Ok(())
    })
}

/// Enclosure of the S-regulator `R_S`.
#[no_mangle]
pub unsafe extern "C" fn eb_sspec_regulator(sspec: *const EbSSpec, lo: *mut f64, hi: *mut f64) -> EbStatus {
    guard(|| {
        let r = s_regulator(&handle(sspec, "sspec")?.0, PREC)?;
        *out(lo, "lo")? = r.value.lo_f64();
        *out(hi, "hi")? = r.value.hi_f64();
        Ok(())
    })
}

unsafe fn unit_inputs(sspec: *const EbSSpec, alpha: *const c_char, beta: *const c_char) -> Result<BoundInputs, Fail> {
    let s = &handle(sspec, "sspec")?.0;
    let d = s.field().radicand().unwrap_or(0);
    let a = parse_element(text(alpha, "alpha")?, d)?;
    let b = parse_element(text(beta, "beta")?, d)?;
    s.field().require_element(&a)?;
    s.field().require_element(&b)?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("alpha and beta must be nonzero".into()).into());
    }
    let h = big_h(&a, &b, PREC)?;
    Ok(BoundInputs::from_sspec(s, h.value)?)
}

/// Every applicable bound for `alpha*x + beta*y = 1` as JSON; free with
/// [`eb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn eb_bound_unit_eq(
    sspec: *const EbSSpec,
    alpha: *const c_char,
    beta: *const c_char,
    json: *mut *mut c_char,
) -> EbStatus {
    guard(|| {
        let slot = out(json, "json")?;
        *slot = ptr::null_mut();
        let sel = best_unit_bound(&unit_inputs(sspec, alpha, beta)?)?;
        *slot = c_string(serde_json::to_string(&sel).expect("serializable"));
        Ok(())
    })
}

/// Upper end of `ln B` for the smallest bound `B`.
#[no_mangle]
pub unsafe extern "C" fn eb_bound_unit_eq_best(
    sspec: *const EbSSpec,
    alpha: *const c_char,
    beta: *const c_char,
    log_bound: *mut f64,
) -> EbStatus {
    guard(|| {
        let slot = out(log_bound, "log_bound")?;
        let sel = best_unit_bound(&unit_inputs(sspec, alpha, beta)?)?;
        let best = sel.best_report().and_then(|r| r.log_value.as_ref()).ok_or_else(|| Error::Domain("no applicable bound".into()))?;
        *slot = best.hi_f64();
        Ok(())
    })
}

/// Runs the command line tool with `argv` (`argv[0]` is the program name).
/// `stdout_text` and `stderr_text` receive what it printed and must be freed
/// with [`eb_string_free`]; `exit_code` receives its exit status.
#[no_mangle]
pub unsafe extern "C" fn eb_run(
    argc: c_int,
    argv: *const *const c_char,
    stdout_text: *mut *mut c_char,
    stderr_text: *mut *mut c_char,
    exit_code: *mut c_int,
) -> EbStatus {
    guard(|| {
        let so = out(stdout_text, "stdout_text")?;
        let se = out(stderr_text, "stderr_text")?;
        let code = out(exit_code, "exit_code")?;
        *so = ptr::null_mut();
        *se = ptr::null_mut();
        if argc < 0 || (argc > 0 && argv.is_null()) {
            return Err(Fail::Null("argv"));
        }
        let mut args = Vec::with_capacity(argc as usize);
        for i in 0..argc as usize {
            args.push(text(*argv.add(i), "argv entry")?.to_string());
        }
        let (mut o, mut e) = (Vec::new(), Vec::new());
        *code = effbounds::cli::run(args, &mut o, &mut e);
        *so = c_string(String::from_utf8_lossy(&o).into_owned());
        *se = c_string(String::from_utf8_lossy(&e).into_owned());
        Ok(())
    })
}
