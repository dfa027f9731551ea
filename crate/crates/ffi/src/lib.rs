//! C interface. Every call returns an [`L2tStatus`]; on failure the message
//! is available from [`l2t_last_error`] on the same thread. Handles and
//! strings returned through out-parameters are owned by the caller and
//! released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::Parser;
use l2torsion::cli::{report, Cli};
use l2torsion::complex::{torsion_of_hom, TorsionValue};
use l2torsion::fkdet::{estimate_fk, fk_of_torsion};
use l2torsion::freegroup::FreeHom;
use l2torsion::groupring::GroupRingElt;
use l2torsion::json::{hom_from_json, parse_document, torsion_to_json};
use l2torsion::oracle::Budget;
use l2torsion::stallings::{decide_weak_iso, is_isomorphism};
use l2torsion::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L2tStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed input: parse, schema, shape or rank errors.
    InvalidInput = 3,
    /// The oracle or a cap could not settle the question.
    Undecided = 4,
    EstimationFailed = 5,
    Panic = 6,
}

/// A free group homomorphism.
pub struct L2tHom(FreeHom);

/// A torsion value over the free group ring.
pub struct L2tTorsion {
    rank: usize,
    value: TorsionValue<GroupRingElt>,
}

/// An element of the free group ring.
pub struct L2tElement(GroupRingElt);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

fn status_of(e: &Error) -> L2tStatus {
    set_error(e.to_string());
    match e.exit_code() {
        3 => L2tStatus::Undecided,
        4 => L2tStatus::EstimationFailed,
        _ => L2tStatus::InvalidInput,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), L2tStatus>) -> L2tStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => L2tStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            L2tStatus::Panic
        }
    }
}

fn lib<T>(r: l2torsion::Result<T>) -> Result<T, L2tStatus> {
    r.map_err(|e| status_of(&e))
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, L2tStatus> {
    if p.is_null() {
        set_error("null argument");
        return Err(L2tStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        L2tStatus::InvalidUtf8
    })
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, L2tStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null argument");
        L2tStatus::NullArgument
    })
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), L2tStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(L2tStatus::NullArgument);
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message of the last failed call on this thread; empty when none. The
/// pointer stays valid until the next failing call on the thread.
#[no_mangle]
pub extern "C" fn l2t_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn l2t_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn l2t_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"domain_rank", "codomain_rank", "images", "alphabet"?}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn l2t_hom_from_json(json: *const c_char, out: *mut *mut L2tHom) -> L2tStatus {
    guard(|| {
        let doc = lib(parse_document(str_arg(json)?))?;
        let phi = lib(hom_from_json(&doc))?;
        write_out(out, Box::into_raw(Box::new(L2tHom(phi))))
    })
}

/// # Safety
/// `h` must come from [`l2t_hom_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn l2t_hom_free(h: *mut L2tHom) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Whether the handlebody of the homomorphism is taut.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn l2t_hom_is_taut(h: *const L2tHom, out: *mut bool) -> L2tStatus {
    guard(|| {
        let phi = &ref_arg(h)?.0;
        write_out(out, lib(decide_weak_iso(phi))?)
    })
}

/// Whether the handlebody of the homomorphism is a product.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn l2t_hom_is_product(h: *const L2tHom, out: *mut bool) -> L2tStatus {
    guard(|| {
        let phi = &ref_arg(h)?.0;
        write_out(out, lib(is_isomorphism(phi))?)
    })
}

/// Torsion of the Fox Jacobian, with the oracle limited to representation
/// degrees up to `budget_size`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn l2t_hom_torsion(h: *const L2tHom, budget_size: usize, seed: u64, out: *mut *mut L2tTorsion) -> L2tStatus {
    guard(|| {
        let phi = &ref_arg(h)?.0;
        let budget = Budget { max_size: budget_size, seed, ..Budget::default() };
        let value = lib(torsion_of_hom(phi, &budget))?;
        write_out(out, Box::into_raw(Box::new(L2tTorsion { rank: phi.codomain_rank(), value })))
    })
}

/// # Safety
/// `t` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn l2t_torsion_free(t: *mut L2tTorsion) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn l2t_torsion_is_zero(t: *const L2tTorsion, out: *mut bool) -> L2tStatus {
    guard(|| write_out(out, ref_arg(t)?.value.is_zero()))
}

/// JSON document of the torsion value; free with [`l2t_string_free`].
///
/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn l2t_torsion_to_json(t: *const L2tTorsion, out: *mut *mut c_char) -> L2tStatus {
    guard(|| {
        let t = ref_arg(t)?;
        write_out(out, c_string(torsion_to_json(t.rank, &t.value).to_string()))
    })
}

/// Monte Carlo determinant of a torsion value.
///
/// # Safety
/// `t` must be a live handle; `estimate` and `stderr` writable.
#[no_mangle]
pub unsafe extern "C" fn l2t_torsion_fk_det(t: *const L2tTorsion, n: usize, trials: usize, seed: u64, estimate: *mut f64, stderr: *mut f64) -> L2tStatus {
    guard(|| {
        let e = lib(fk_of_torsion(&ref_arg(t)?.value, n, trials, seed))?;
        write_out(estimate, e.estimate)?;
        write_out(stderr, e.stderr)
    })
}

/// Parses an element such as `"1 + x1 x2^-1"` over `rank` generators.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn l2t_element_parse(rank: usize, text: *const c_char, out: *mut *mut L2tElement) -> L2tStatus {
    guard(|| {
        let a = lib(GroupRingElt::parse(rank, str_arg(text)?))?;
        write_out(out, Box::into_raw(Box::new(L2tElement(a))))
    })
}

/// # Safety
/// `e` must come from [`l2t_element_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn l2t_element_free(e: *mut L2tElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Canonical text of the element; free with [`l2t_string_free`].
///
/// # Safety
/// `e` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn l2t_element_to_string(e: *const L2tElement, out: *mut *mut c_char) -> L2tStatus {
    guard(|| write_out(out, c_string(ref_arg(e)?.0.to_string())))
}

/// # Safety
/// `e` must be a live handle; `estimate` and `stderr` writable.
#[no_mangle]
pub unsafe extern "C" fn l2t_element_fk_det(e: *const L2tElement, n: usize, trials: usize, seed: u64, estimate: *mut f64, stderr: *mut f64) -> L2tStatus {
    guard(|| {
        let est = lib(estimate_fk(&ref_arg(e)?.0, n, trials, seed))?;
        write_out(estimate, est.estimate)?;
        write_out(stderr, est.stderr)
    })
}

/// Runs a command-line invocation such as `"--seed 3 torsion-hom"` on the
/// JSON document `input` and returns the report the tool would print.
/// `input` may be null for commands that read no document.
///
/// # Safety
/// `args` and a non-null `input` must be nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn l2t_run(args: *const c_char, input: *const c_char, out: *mut *mut c_char) -> L2tStatus {
    guard(|| {
        let argv = std::iter::once("l2torsion").chain(str_arg(args)?.split_whitespace());
        let cli = Cli::try_parse_from(argv).map_err(|e| {
            set_error(e.to_string());
            L2tStatus::InvalidInput
        })?;
        let doc = match cli.command.implicit_input() {
            Some(v) => v,
            None => lib(parse_document(str_arg(input)?))?,
        };
        let value = lib(report(&cli.command, &doc, &cli.opts))?;
        write_out(out, c_string(value.to_string()))
    })
}
