//! C interface to linkforge.
//!
//! Diagrams and string links are opaque handles owned by the caller and
//! released with `lf_diagram_free` / `lf_tangle_free`. Every fallible call
//! returns an `LfStatus`; on failure `lf_last_error` describes the problem.
//! Strings handed out by the library must be released with `lf_string_free`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use linkforge::compose::{self, ClosurePattern, Side, TangleDiagram};
use linkforge::invariants::{conway, jones_with, Limits};
use linkforge::{Diagram, Error, HalfLaurent, Verdict};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Domain = 5,
    CrossingCap = 6,
    Invariant = 7,
    Io = 8,
    Panic = 9,
}

/// Opaque link diagram.
pub struct LfDiagram(Diagram);

/// Opaque string link.
pub struct LfTangle(TangleDiagram);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LfStatus {
    match e {
        Error::Parse(_) | Error::Json(_) => LfStatus::Parse,
        Error::Validation(_) => LfStatus::Validation,
        Error::Domain(_) => LfStatus::Domain,
        Error::CrossingCap { .. } => LfStatus::CrossingCap,
        Error::Invariant(_) => LfStatus::Invariant,
        Error::Io(_) => LfStatus::Io,
    }
}

struct Failure(LfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Outcome) -> LfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LfStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            LfStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(LfStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> std::result::Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(LfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> std::result::Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Outcome {
    let c = CString::new(s).map_err(|_| Failure(LfStatus::Invariant, "string with interior nul".into()))?;
    put(out, c.into_raw())
}

unsafe fn put_diagram(out: *mut *mut LfDiagram, d: Diagram) -> Outcome {
    put(out, Box::into_raw(Box::new(LfDiagram(d))))
}

unsafe fn put_tangle(out: *mut *mut LfTangle, t: TangleDiagram) -> Outcome {
    put(out, Box::into_raw(Box::new(LfTangle(t))))
}

fn limits() -> std::result::Result<Limits, Failure> {
    Ok(Limits::from_env()?)
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn lf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a diagram from JSON or PD text.
#[no_mangle]
pub unsafe extern "C" fn lf_diagram_parse(input: *const c_char, out: *mut *mut LfDiagram) -> LfStatus {
    guard(|| put_diagram(out, Diagram::parse(text(input, "input")?)?))
}

#[no_mangle]
pub unsafe extern "C" fn lf_diagram_free(d: *mut LfDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

#[no_mangle]
pub unsafe extern "C" fn lf_diagram_component_count(d: *const LfDiagram, out: *mut usize) -> LfStatus {
    guard(|| put(out, get(d, "diagram")?.0.component_count()))
}

#[no_mangle]
pub unsafe extern "C" fn lf_diagram_crossing_count(d: *const LfDiagram, out: *mut usize) -> LfStatus {
    guard(|| put(out, get(d, "diagram")?.0.crossing_count()))
}

#[no_mangle]
pub unsafe extern "C" fn lf_diagram_writhe(d: *const LfDiagram, out: *mut i64) -> LfStatus {
    guard(|| put(out, get(d, "diagram")?.0.writhe()))
}

/// Jones polynomial in canonical text form, e.g. `t + t^3 - t^4`.
#[no_mangle]
pub unsafe extern "C" fn lf_diagram_jones(d: *const LfDiagram, out: *mut *mut c_char) -> LfStatus {
    guard(|| put_string(out, jones_with(&get(d, "diagram")?.0, limits()?)?.to_string()))
}

/// Conway polynomial in canonical text form, e.g. `z^2 + 1`.
#[no_mangle]
pub unsafe extern "C" fn lf_diagram_conway(d: *const LfDiagram, out: *mut *mut c_char) -> LfStatus {
    guard(|| put_string(out, conway(&get(d, "diagram")?.0)?.to_string()))
}

#[no_mangle]
pub unsafe extern "C" fn lf_diagram_to_json(d: *const LfDiagram, out: *mut *mut c_char) -> LfStatus {
    guard(|| put_string(out, get(d, "diagram")?.0.to_json()))
}

#[no_mangle]
pub unsafe extern "C" fn lf_diagram_mirror(d: *const LfDiagram, out: *mut *mut LfDiagram) -> LfStatus {
    guard(|| put_diagram(out, get(d, "diagram")?.0.mirror()))
}

/// Connected sum of component `i` of `l` with component `j` of `k`
/// (0-based), cut at the first arc of each.
#[no_mangle]
pub unsafe extern "C" fn lf_hashizume_sum(
    l: *const LfDiagram,
    i: usize,
    k: *const LfDiagram,
    j: usize,
    out: *mut *mut LfDiagram,
) -> LfStatus {
    guard(|| {
        let d = compose::hashizume_sum(&get(l, "first diagram")?.0, i, &get(k, "second diagram")?.0, j, None, None)?;
        put_diagram(out, d)
    })
}

/// Parses a string link from JSON with `"endpoints"`.
#[no_mangle]
pub unsafe extern "C" fn lf_tangle_parse(input: *const c_char, out: *mut *mut LfTangle) -> LfStatus {
    guard(|| put_tangle(out, TangleDiagram::parse(text(input, "input")?)?))
}

#[no_mangle]
pub unsafe extern "C" fn lf_tangle_free(t: *mut LfTangle) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

#[no_mangle]
pub unsafe extern "C" fn lf_tangle_strand_count(t: *const LfTangle, out: *mut usize) -> LfStatus {
    guard(|| put(out, get(t, "string link")?.0.strand_count()))
}

#[no_mangle]
pub unsafe extern "C" fn lf_tangle_to_json(t: *const LfTangle, out: *mut *mut c_char) -> LfStatus {
    guard(|| put_string(out, get(t, "string link")?.0.to_json()))
}

#[no_mangle]
pub unsafe extern "C" fn lf_tangle_stack(a: *const LfTangle, b: *const LfTangle, out: *mut *mut LfTangle) -> LfStatus {
    guard(|| put_tangle(out, compose::stack(&get(a, "lower string link")?.0, &get(b, "upper string link")?.0)?))
}

#[no_mangle]
pub unsafe extern "C" fn lf_tangle_reflect(t: *const LfTangle, out: *mut *mut LfTangle) -> LfStatus {
    guard(|| put_tangle(out, compose::reflect(&get(t, "string link")?.0)))
}

/// Closes a string link. `pattern` is cycle notation such as `(1 2)`;
/// `side_bottom` nonzero walks the first strand of each cycle downward.
#[no_mangle]
pub unsafe extern "C" fn lf_tangle_close(
    t: *const LfTangle,
    pattern: *const c_char,
    side_bottom: i32,
    out: *mut *mut LfDiagram,
) -> LfStatus {
    guard(|| {
        let side = if side_bottom != 0 { Side::Bottom } else { Side::Top };
        let p = text(pattern, "pattern")?.parse::<ClosurePattern>()?.with_side(side);
        put_diagram(out, compose::close(&get(t, "string link")?.0, &p)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn lf_tangle_double(t: *const LfTangle, out: *mut *mut LfDiagram) -> LfStatus {
    guard(|| put_diagram(out, compose::double(&get(t, "string link")?.0)?))
}

/// Sets `*excluded` to 1 when `v_knot` does not divide `v_link` (so the
/// knot is not a local knot), 0 when the test is inconclusive.
#[no_mangle]
pub unsafe extern "C" fn lf_exclude_local_knot(
    v_link: *const c_char,
    v_knot: *const c_char,
    excluded: *mut i32,
) -> LfStatus {
    guard(|| {
        let link: HalfLaurent = text(v_link, "link polynomial")?.parse()?;
        let knot: HalfLaurent = text(v_knot, "knot polynomial")?.parse()?;
        let v = linkforge::exclude_local_knot(&link, &knot)?;
        put(excluded, i32::from(v == Verdict::Excluded))
    })
}
