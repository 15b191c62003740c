//! C interface to `padset`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`PadsetStatus`]; on failure `padset_last_error_message` describes the
//! problem. Strings returned through `char **` must be released with
//! [`padset_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use padset::format::{function_from_json, function_to_json, partition_to_json, set_from_json, set_to_json};
use padset::gss::{generate_family, verify_gss, verify_multiwavelet_set, FamilyKind};
use padset::padic::format_rational;
use padset::report::{render_report, Format};
use padset::scaling::{count_integers, verify_scaling_set};
use padset::{ClopenSet, Direction, Error, LCFunction, Limits, Prime, VerificationReport, Verdict};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadsetStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotPrime = 4,
    MixedPrimes = 5,
    InvalidInput = 6,
    ResolutionLimit = 7,
    Precondition = 8,
    Inconsistent = 9,
    Panic = 10,
}

/// Overall outcome of a verification report.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadsetVerdict {
    Pass = 0,
    Fail = 1,
    Inconclusive = 2,
    CertifiedNecessary = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadsetFamily {
    Kozyrev = 0,
    KhrennikovShelkovich = 1,
}

/// A compact open subset of Q_p.
pub struct PadsetSet(ClopenSet);

/// A locally constant, compactly supported function.
pub struct PadsetFunction(LCFunction);

/// A verification report.
pub struct PadsetReport(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PadsetStatus {
    match e {
        Error::NotPrime(_) => PadsetStatus::NotPrime,
        Error::MixedPrimes(..) => PadsetStatus::MixedPrimes,
        Error::Parse(_) => PadsetStatus::Parse,
        Error::InvalidInput(_) => PadsetStatus::InvalidInput,
        Error::ResolutionLimit(_) => PadsetStatus::ResolutionLimit,
        Error::Precondition { .. } => PadsetStatus::Precondition,
        Error::Inconsistent(_) => PadsetStatus::Inconsistent,
    }
}

enum Failure {
    Null(&'static str),
    Utf8,
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PadsetStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            PadsetStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("null pointer: {what}"));
            PadsetStatus::NullArgument
        }
        Ok(Err(Failure::Utf8)) => {
            set_last_error("string is not valid UTF-8");
            PadsetStatus::InvalidUtf8
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            PadsetStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn input_str<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure::Utf8)
}

unsafe fn write_out<T>(out: *mut *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    *out = CString::new(s).expect("no interior NUL").into_raw();
    Ok(())
}

/// Message for the most recent failed call on this thread; empty after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn padset_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn padset_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn padset_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"p": …, "balls": […]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_set_from_json(json: *const c_char, out: *mut *mut PadsetSet) -> PadsetStatus {
    guard(|| {
        let s = set_from_json(input_str(json, "json")?)?;
        write_out(out, PadsetSet(s), "out")
    })
}

/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_set_to_json(set: *const PadsetSet, out: *mut *mut c_char) -> PadsetStatus {
    guard(|| write_string(out, set_to_json(&borrow(set, "set")?.0)))
}

/// Haar measure as a rational string such as `"3/2"`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_set_measure(set: *const PadsetSet, out: *mut *mut c_char) -> PadsetStatus {
    guard(|| write_string(out, format_rational(&borrow(set, "set")?.0.measure())))
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadsetSetOp {
    Union = 0,
    Intersection = 1,
    Difference = 2,
    SymmetricDifference = 3,
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_set_combine(
    a: *const PadsetSet,
    b: *const PadsetSet,
    op: PadsetSetOp,
    out: *mut *mut PadsetSet,
) -> PadsetStatus {
    guard(|| {
        let (a, b) = (&borrow(a, "a")?.0, &borrow(b, "b")?.0);
        let r = match op {
            PadsetSetOp::Union => a.union(b),
            PadsetSetOp::Intersection => a.intersect(b),
            PadsetSetOp::Difference => a.difference(b),
            PadsetSetOp::SymmetricDifference => a.symmetric_difference(b),
        }?;
        write_out(out, PadsetSet(r), "out")
    })
}

/// # Safety
/// `set` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn padset_set_free(set: *mut PadsetSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Parses `{"p": …, "terms": […]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_function_from_json(
    json: *const c_char,
    out: *mut *mut PadsetFunction,
) -> PadsetStatus {
    guard(|| {
        let f = function_from_json(input_str(json, "json")?)?;
        write_out(out, PadsetFunction(f), "out")
    })
}

/// `1_S`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_function_indicator(
    set: *const PadsetSet,
    out: *mut *mut PadsetFunction,
) -> PadsetStatus {
    guard(|| write_out(out, PadsetFunction(LCFunction::indicator(&borrow(set, "set")?.0)), "out"))
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_function_to_json(f: *const PadsetFunction, out: *mut *mut c_char) -> PadsetStatus {
    guard(|| write_string(out, function_to_json(&borrow(f, "f")?.0)))
}

/// Forward transform, or inverse when `inverse` is true.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_function_fourier(
    f: *const PadsetFunction,
    inverse: bool,
    out: *mut *mut PadsetFunction,
) -> PadsetStatus {
    guard(|| {
        let dir = if inverse { Direction::Inverse } else { Direction::Forward };
        write_out(out, PadsetFunction(borrow(f, "f")?.0.fourier(dir)), "out")
    })
}

/// Exact `∫ f conj(g)`: the cyclotomic value as JSON in `exact_json`
/// (may be null) and its double-precision value in `re`, `im`.
///
/// # Safety
/// `f`, `g` must be live handles; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_function_inner_product(
    f: *const PadsetFunction,
    g: *const PadsetFunction,
    exact_json: *mut *mut c_char,
    re: *mut f64,
    im: *mut f64,
) -> PadsetStatus {
    guard(|| {
        let v = borrow(f, "f")?.0.inner_product(&borrow(g, "g")?.0)?;
        if re.is_null() || im.is_null() {
            return Err(Failure::Null("re/im"));
        }
        let z = v.to_complex();
        *re = z.re;
        *im = z.im;
        if !exact_json.is_null() {
            write_string(exact_json, serde_json::to_string(&v.to_json()).expect("serializable"))?;
        }
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn padset_function_free(f: *mut PadsetFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// The five necessary conditions for a scaling set.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_verify_scaling_set(set: *const PadsetSet, out: *mut *mut PadsetReport) -> PadsetStatus {
    guard(|| {
        let limits = Limits::from_env()?;
        write_out(out, PadsetReport(verify_scaling_set(&borrow(set, "set")?.0, &limits)), "out")
    })
}

/// Generalized scaling set of order `order`, with automatic partition.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_verify_gss(
    set: *const PadsetSet,
    order: u64,
    out: *mut *mut PadsetReport,
) -> PadsetStatus {
    guard(|| {
        let limits = Limits::from_env()?;
        let r = verify_gss(&borrow(set, "set")?.0, order, None, &limits)?;
        write_out(out, PadsetReport(r), "out")
    })
}

/// Multiwavelet set given as `count` pieces.
///
/// # Safety
/// `pieces` must point to `count` live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_verify_multiwavelet_set(
    pieces: *const *const PadsetSet,
    count: usize,
    out: *mut *mut PadsetReport,
) -> PadsetStatus {
    guard(|| {
        if pieces.is_null() && count > 0 {
            return Err(Failure::Null("pieces"));
        }
        let handles = if count == 0 { &[][..] } else { std::slice::from_raw_parts(pieces, count) };
        let sets = handles
            .iter()
            .map(|&h| borrow(h, "piece").map(|s| s.0.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let limits = Limits::from_env()?;
        write_out(out, PadsetReport(verify_multiwavelet_set(&sets, &limits)?), "out")
    })
}

/// `#{n ∈ [0, p^{M+N}) : p^{-M} n ∈ S}`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_count_integers(
    set: *const PadsetSet,
    m: i64,
    n: i64,
    out: *mut u64,
) -> PadsetStatus {
    guard(|| {
        let limits = Limits::from_env()?;
        let c = count_integers(&borrow(set, "set")?.0, m, n, &limits)?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        *out = c;
        Ok(())
    })
}

/// Generates a family. `m` is ignored for Kozyrev. Writes `G`, the order
/// `L` and the pieces as partition JSON.
///
/// # Safety
/// All out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_generate_family(
    family: PadsetFamily,
    p: u64,
    m: u32,
    g_out: *mut *mut PadsetSet,
    order_out: *mut u64,
    pieces_json_out: *mut *mut c_char,
) -> PadsetStatus {
    guard(|| {
        let kind = match family {
            PadsetFamily::Kozyrev => FamilyKind::Kozyrev,
            PadsetFamily::KhrennikovShelkovich => FamilyKind::KhrennikovShelkovich,
        };
        let fam = generate_family(kind, Prime::new(p)?, Some(m))?;
        if order_out.is_null() {
            return Err(Failure::Null("order_out"));
        }
        write_string(pieces_json_out, partition_to_json(&fam.pieces)?)?;
        *order_out = fam.order;
        write_out(g_out, PadsetSet(fam.g), "g_out")
    })
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn padset_report_verdict(report: *const PadsetReport) -> PadsetVerdict {
    match report.as_ref().map(|r| r.0.verdict) {
        Some(Verdict::Pass) => PadsetVerdict::Pass,
        Some(Verdict::CertifiedNecessary) => PadsetVerdict::CertifiedNecessary,
        Some(Verdict::Inconclusive) | None => PadsetVerdict::Inconclusive,
        Some(Verdict::Fail) => PadsetVerdict::Fail,
    }
}

/// Renders as JSON (`json` true) or text.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padset_report_render(
    report: *const PadsetReport,
    json: bool,
    out: *mut *mut c_char,
) -> PadsetStatus {
    guard(|| {
        let fmt = if json { Format::Json } else { Format::Text };
        write_string(out, render_report(&borrow(report, "report")?.0, fmt))
    })
}

/// # Safety
/// `report` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn padset_report_free(report: *mut PadsetReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
