//! C ABI over `schwarz-core`.
//!
//! Every entry point returns an [`SzStatus`]. On failure the message is
//! available from [`sz_last_error`] on the same thread until the next call.
//! Strings handed out by the library are released with [`sz_string_free`],
//! series handles with [`sz_series_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use schwarz_core::groups::{classify, coset_enumerate, ClassificationInput, Presentation};
use schwarz_core::scalar::parse_rational;
use schwarz_core::schwarz::{fit_weight4, schwarzian_any};
use schwarz_core::verify::{find, run_identity};
use schwarz_core::{forms, AnySeries, Backend, Error};

/// Result codes.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Domain = 4,
    Precision = 5,
    BackendMismatch = 6,
    DivisionByZero = 7,
    Enumeration = 8,
    NotFound = 9,
    Panic = 10,
}

/// Opaque handle to a truncated q-series.
pub struct SzSeries(AnySeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SzStatus {
    match e {
        Error::InvalidArgument(_) => SzStatus::InvalidArgument,
        Error::Parse(_) | Error::UnknownForm(_) => SzStatus::Parse,
        Error::InsufficientPrecision { .. }
        | Error::BudgetExceeded { .. }
        | Error::MissingTolerance => SzStatus::Precision,
        Error::BackendMismatch { .. } => SzStatus::BackendMismatch,
        Error::DivisionByZero => SzStatus::DivisionByZero,
        Error::EnumerationExceeded { .. } => SzStatus::Enumeration,
        _ => SzStatus::Domain,
    }
}

struct Fail(SzStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SzStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SzStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            SzStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(SzStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SzStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn series_arg<'a>(p: *const SzSeries, what: &str) -> Result<&'a AnySeries, Fail> {
    p.as_ref()
        .map(|s| &s.0)
        .ok_or_else(|| Fail(SzStatus::NullPointer, format!("{what} is null")))
}

fn check_out<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(Fail(
            SzStatus::NullPointer,
            "output pointer is null".to_string(),
        ))
    } else {
        Ok(())
    }
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("interior NULs removed")
        .into_raw()
}

fn backend_for(precision: u32) -> Result<Backend, Fail> {
    if precision == 0 {
        Ok(Backend::Rational)
    } else {
        Ok(Backend::complex(precision)?)
    }
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn sz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Release a series handle. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sz_series_free(s: *mut SzSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Expansion of a named form modulo `O(q^order)`. `precision` 0 selects the
/// exact rational backend, anything else the complex backend with that
/// many bits.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sz_form(
    name: *const c_char,
    order: i64,
    precision: u32,
    out: *mut *mut SzSeries,
) -> SzStatus {
    guard(|| {
        check_out(out)?;
        let name: forms::FormName = str_arg(name, "name")?.parse()?;
        let s = forms::form(name, order, backend_for(precision)?)?;
        *out = Box::into_raw(Box::new(SzSeries(s)));
        Ok(())
    })
}

/// Arithmetic on two series: `op` is one of `'+'`, `'-'`, `'*'`, `'/'`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_binary(
    a: *const SzSeries,
    op: c_char,
    b: *const SzSeries,
    out: *mut *mut SzSeries,
) -> SzStatus {
    guard(|| {
        check_out(out)?;
        let (a, b) = (series_arg(a, "a")?, series_arg(b, "b")?);
        let r = match op as u8 {
            b'+' => a.add(b)?,
            b'-' => a.sub(b)?,
            b'*' => a.mul(b)?,
            b'/' => a.div(b)?,
            other => {
                return Err(Fail(
                    SzStatus::InvalidArgument,
                    format!("unknown operator `{}`", other as char),
                ))
            }
        };
        *out = Box::into_raw(Box::new(SzSeries(r)));
        Ok(())
    })
}

/// `s^(p/q)`, with the leading coefficient normalized to one when
/// `normalize` is nonzero.
///
/// # Safety
/// `s` must be a live handle, `exponent` a NUL-terminated string such as
/// `"1/3"`, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_pow(
    s: *const SzSeries,
    exponent: *const c_char,
    normalize: i32,
    out: *mut *mut SzSeries,
) -> SzStatus {
    guard(|| {
        check_out(out)?;
        let s = series_arg(s, "s")?;
        let e = parse_rational(str_arg(exponent, "exponent")?)?;
        let (r, _) = s.powf(&e, normalize != 0)?;
        *out = Box::into_raw(Box::new(SzSeries(r)));
        Ok(())
    })
}

/// Normalized Schwarzian `{h, τ}/2π²`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sz_schwarzian(h: *const SzSeries, out: *mut *mut SzSeries) -> SzStatus {
    guard(|| {
        check_out(out)?;
        let s = schwarzian_any(series_arg(h, "h")?)?;
        *out = Box::into_raw(Box::new(SzSeries(s)));
        Ok(())
    })
}

/// Textual expansion, e.g. `1 + 240 q + O(q^2)`.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_to_string(
    s: *const SzSeries,
    out: *mut *mut c_char,
) -> SzStatus {
    guard(|| {
        check_out(out)?;
        *out = string_out(series_arg(s, "s")?.to_string());
        Ok(())
    })
}

/// JSON wire format of the series.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_to_json(s: *const SzSeries, out: *mut *mut c_char) -> SzStatus {
    guard(|| {
        check_out(out)?;
        *out = string_out(series_arg(s, "s")?.to_json_string());
        Ok(())
    })
}

/// Fit a Schwarzian against `θ₂⁸` and `(θ₃θ₄)⁴` below `q^order`; the
/// result is written as JSON.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sz_fit(s: *const SzSeries, order: i64, out: *mut *mut c_char) -> SzStatus {
    guard(|| {
        check_out(out)?;
        let fit = fit_weight4(series_arg(s, "s")?, order, None)?;
        *out = string_out(fit.to_json().to_string());
        Ok(())
    })
}

/// Classify `S = a·(θ₃θ₄)⁴ + b·θ₂⁸` with `a`, `b` exact fractions; the
/// result is written as JSON.
///
/// # Safety
/// `a`, `b` must be NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sz_classify(
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> SzStatus {
    guard(|| {
        check_out(out)?;
        let a = parse_rational(str_arg(a, "a")?)?;
        let b = parse_rational(str_arg(b, "b")?)?;
        let r = classify(ClassificationInput::from_squares(&a, &b)?)?;
        *out = string_out(r.to_json().to_string());
        Ok(())
    })
}

/// Order of `⟨a, b | b², relators⟩`, e.g. `"a^3, (ba)^3"`.
///
/// # Safety
/// `relators` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sz_coset_enumerate(
    relators: *const c_char,
    max_cosets: usize,
    out: *mut usize,
) -> SzStatus {
    guard(|| {
        check_out(out)?;
        let p: Presentation = str_arg(relators, "relators")?.parse()?;
        *out = coset_enumerate(&p, max_cosets)?;
        Ok(())
    })
}

/// Run one catalog record; `order` ≤ 0 selects its default order. The
/// verdict is written as JSON; `passed` receives 1 on pass and 0 otherwise.
///
/// # Safety
/// `id` must be a NUL-terminated string; `out` and `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn sz_verify(
    id: *const c_char,
    order: i64,
    passed: *mut i32,
    out: *mut *mut c_char,
) -> SzStatus {
    guard(|| {
        check_out(out)?;
        check_out(passed)?;
        let id = str_arg(id, "id")?;
        let rec = find(id).ok_or_else(|| Fail(SzStatus::NotFound, format!("no record `{id}`")))?;
        let order = if order > 0 { order } else { rec.default_order };
        let v = run_identity(&rec, order);
        *passed = v.passed() as i32;
        *out = string_out(v.to_json().to_string());
        Ok(())
    })
}
