//! C ABI for `popmatch`.
//!
//! Instances and matchings live behind opaque handles that the caller frees with the matching
//! `*_free` function. Every fallible call returns a [`PmStatus`]; on failure a description is
//! available from [`pm_last_error_message`] on the same thread. Vertex indices are 0-based
//! positions in the `students:` and `courses:` declarations. Strings returned by the library are
//! released with [`pm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use popmatch::certificate::{self, Verdict};
use popmatch::instance::{parse_instance, parse_matching, write_matching};
use popmatch::oracle::{self, EnumerationBudget, OracleError};
use popmatch::solvers::{self, LevelMatching};
use popmatch::{votes, Instance, Matching};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidMatching = 4,
    OutOfRange = 5,
    BudgetExceeded = 6,
    Internal = 7,
}

/// Outcome of [`pm_verify_popular`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmVerdict {
    Popular = 0,
    NotPopular = 1,
    Inconclusive = 2,
}

/// A validated instance.
pub struct PmInstance(Instance);

/// A matching of some instance. Functions taking both re-check that they belong together.
pub struct PmMatching(Matching);

/// Output of the max-size popular solver: level-tagged edges.
pub struct PmLevelMatching(LevelMatching);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("nul bytes removed"));
}

fn fail(status: PmStatus, message: impl Into<String>) -> PmStatus {
    set_error(message);
    status
}

fn guard(body: impl FnOnce() -> PmStatus) -> PmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => {
            if status == PmStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => fail(PmStatus::Internal, "internal error (panic)"),
    }
}

unsafe fn text_arg<'a>(text: *const c_char) -> Result<&'a str, PmStatus> {
    if text.is_null() {
        return Err(fail(PmStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|e| fail(PmStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, PmStatus> {
    p.as_ref().ok_or_else(|| fail(PmStatus::NullArgument, "null handle"))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, PmStatus> {
    p.as_mut()
        .ok_or_else(|| fail(PmStatus::NullArgument, "null output pointer"))
}

fn checked<'a>(inst: &Instance, m: &'a Matching) -> Result<&'a Matching, PmStatus> {
    m.check(inst)
        .map_err(|e| fail(PmStatus::InvalidMatching, e.to_string()))?;
    Ok(m)
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message for the last failed call on this thread; empty after a success. Owned by the library
/// and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn pm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses an instance in the text format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_instance_parse(text: *const c_char, out: *mut *mut PmInstance) -> PmStatus {
    guard(|| {
        let out = tri!(out_arg(out));
        *out = ptr::null_mut();
        let text = tri!(text_arg(text));
        match parse_instance(text) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(PmInstance(inst)));
                PmStatus::Ok
            }
            Err(e) => fail(PmStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `inst` must be null or a handle from [`pm_instance_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pm_instance_free(inst: *mut PmInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of students, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pm_instance_num_students(inst: *const PmInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.num_students())
}

/// Number of courses, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pm_instance_num_courses(inst: *const PmInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.num_courses())
}

/// Number of mutually acceptable pairs, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pm_instance_num_edges(inst: *const PmInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.num_edges())
}

/// Pairwise-stable matching by student-proposing deferred acceptance.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_solve_stable(inst: *const PmInstance, out: *mut *mut PmMatching) -> PmStatus {
    guard(|| {
        let out = tri!(out_arg(out));
        *out = ptr::null_mut();
        let inst = tri!(handle(inst));
        *out = Box::into_raw(Box::new(PmMatching(solvers::stable_matching(&inst.0))));
        PmStatus::Ok
    })
}

/// Max-size popular matching by the 2-level proposal algorithm.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_solve_maxpop(inst: *const PmInstance, out: *mut *mut PmLevelMatching) -> PmStatus {
    guard(|| {
        let out = tri!(out_arg(out));
        *out = ptr::null_mut();
        let inst = tri!(handle(inst));
        *out = Box::into_raw(Box::new(PmLevelMatching(solvers::max_size_popular(&inst.0))));
        PmStatus::Ok
    })
}

/// # Safety
/// `lm` must be null or a handle from [`pm_solve_maxpop`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pm_level_matching_free(lm: *mut PmLevelMatching) {
    if !lm.is_null() {
        drop(Box::from_raw(lm));
    }
}

/// Number of edges, or 0 for a null handle.
///
/// # Safety
/// `lm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pm_level_matching_size(lm: *const PmLevelMatching) -> usize {
    lm.as_ref().map_or(0, |l| l.0.edges().len())
}

/// Edge `index` in `(student, course)` order with its level (0 or 1).
///
/// # Safety
/// `lm` must be a live handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pm_level_matching_edge(
    lm: *const PmLevelMatching,
    index: usize,
    student: *mut usize,
    course: *mut usize,
    level: *mut u8,
) -> PmStatus {
    guard(|| {
        let lm = tri!(handle(lm));
        let (s, c, l) = (tri!(out_arg(student)), tri!(out_arg(course)), tri!(out_arg(level)));
        let Some(e) = lm.0.edges().get(index) else {
            return fail(PmStatus::OutOfRange, format!("edge index {index} out of range"));
        };
        (*s, *c, *l) = (e.student, e.course, e.level.as_u8());
        PmStatus::Ok
    })
}

/// The matching obtained by dropping level tags, as a new handle.
///
/// # Safety
/// `lm` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_level_matching_projection(
    lm: *const PmLevelMatching,
    out: *mut *mut PmMatching,
) -> PmStatus {
    guard(|| {
        let out = tri!(out_arg(out));
        *out = ptr::null_mut();
        let lm = tri!(handle(lm));
        *out = Box::into_raw(Box::new(PmMatching(lm.0.projection().clone())));
        PmStatus::Ok
    })
}

/// Parses a matching of `inst` from the text pair format or JSON.
///
/// # Safety
/// `inst` must be a live handle, `text` nul-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_matching_parse(
    inst: *const PmInstance,
    text: *const c_char,
    out: *mut *mut PmMatching,
) -> PmStatus {
    guard(|| {
        let out = tri!(out_arg(out));
        *out = ptr::null_mut();
        let inst = tri!(handle(inst));
        let text = tri!(text_arg(text));
        match parse_matching(&inst.0, text) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(PmMatching(m)));
                PmStatus::Ok
            }
            Err(e) => fail(PmStatus::InvalidMatching, e.to_string()),
        }
    })
}

/// # Safety
/// `m` must be null or a matching handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pm_matching_free(m: *mut PmMatching) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of pairs, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pm_matching_size(m: *const PmMatching) -> usize {
    m.as_ref().map_or(0, |m| m.0.len())
}

/// Pair `index` in `(student, course)` order.
///
/// # Safety
/// `m` must be a live handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pm_matching_pair(
    m: *const PmMatching,
    index: usize,
    student: *mut usize,
    course: *mut usize,
) -> PmStatus {
    guard(|| {
        let m = tri!(handle(m));
        let (s, c) = (tri!(out_arg(student)), tri!(out_arg(course)));
        let Some(&(a, b)) = m.0.pairs().get(index) else {
            return fail(PmStatus::OutOfRange, format!("pair index {index} out of range"));
        };
        (*s, *c) = (a, b);
        PmStatus::Ok
    })
}

/// Writes `m` in the text pair format. Release the string with [`pm_string_free`].
///
/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_matching_to_string(
    inst: *const PmInstance,
    m: *const PmMatching,
    out: *mut *mut c_char,
) -> PmStatus {
    guard(|| {
        let out = tri!(out_arg(out));
        *out = ptr::null_mut();
        let (inst, m) = (tri!(handle(inst)), tri!(handle(m)));
        let m = tri!(checked(&inst.0, &m.0));
        let text = write_matching(&inst.0, m);
        *out = CString::new(text).expect("names contain no nul bytes").into_raw();
        PmStatus::Ok
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `Delta(m0, m1)`: the votes of all vertices for `m0` over `m1`.
///
/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_big_delta(
    inst: *const PmInstance,
    m0: *const PmMatching,
    m1: *const PmMatching,
    out: *mut i64,
) -> PmStatus {
    guard(|| {
        let out = tri!(out_arg(out));
        let (inst, m0, m1) = (tri!(handle(inst)), tri!(handle(m0)), tri!(handle(m1)));
        match votes::big_delta(&inst.0, &m0.0, &m1.0) {
            Ok(d) => {
                *out = d;
                PmStatus::Ok
            }
            Err(e) => fail(PmStatus::InvalidMatching, e.to_string()),
        }
    })
}

/// Clone-graph popularity check. `optimum` receives the max weight of a complete clone matching;
/// for [`PmVerdict::NotPopular`], `witness` (if non-null) receives a matching that beats `m`.
///
/// # Safety
/// Handles must be live; `verdict` and `optimum` valid; `witness` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pm_verify_popular(
    inst: *const PmInstance,
    m: *const PmMatching,
    verdict: *mut PmVerdict,
    optimum: *mut i64,
    witness: *mut *mut PmMatching,
) -> PmStatus {
    guard(|| {
        let (verdict, optimum) = (tri!(out_arg(verdict)), tri!(out_arg(optimum)));
        if let Some(w) = witness.as_mut() {
            *w = ptr::null_mut();
        }
        let (inst, m) = (tri!(handle(inst)), tri!(handle(m)));
        match certificate::verify_popular(&inst.0, &m.0) {
            Ok(Verdict::Popular { optimum: o, .. }) => (*verdict, *optimum) = (PmVerdict::Popular, o),
            Ok(Verdict::NotPopular {
                optimum: o, witness: t, ..
            }) => {
                (*verdict, *optimum) = (PmVerdict::NotPopular, o);
                if let Some(w) = witness.as_mut() {
                    *w = Box::into_raw(Box::new(PmMatching(t)));
                }
            }
            Ok(Verdict::Inconclusive { optimum: o, .. }) => (*verdict, *optimum) = (PmVerdict::Inconclusive, o),
            Err(e) => return fail(PmStatus::InvalidMatching, e.to_string()),
        }
        PmStatus::Ok
    })
}

/// Exhaustive popularity test within the given enumeration budget.
///
/// # Safety
/// Handles must be live and `popular` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_is_popular_bruteforce(
    inst: *const PmInstance,
    m: *const PmMatching,
    max_edges: usize,
    max_matchings: usize,
    popular: *mut bool,
) -> PmStatus {
    guard(|| {
        let popular = tri!(out_arg(popular));
        let (inst, m) = (tri!(handle(inst)), tri!(handle(m)));
        let budget = EnumerationBudget {
            max_edges,
            max_matchings,
        };
        match oracle::is_popular_bruteforce(&inst.0, &m.0, &budget) {
            Ok(v) => {
                *popular = v.holds;
                PmStatus::Ok
            }
            Err(e @ OracleError::ForeignMatching) => fail(PmStatus::InvalidMatching, e.to_string()),
            Err(e) => fail(PmStatus::BudgetExceeded, e.to_string()),
        }
    })
}
