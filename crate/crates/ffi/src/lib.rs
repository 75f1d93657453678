//! C interface to `dynes`.
//!
//! Structures are opaque [`DynesStructure`] handles owned by the caller and
//! released with [`dynes_free`]. Every function returns a [`DynesStatus`];
//! on failure [`dynes_last_error`] describes the problem. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`dynes_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dynes::cli::{configs_json, posets_json, states_json, traces_json, transitions_json};
use dynes::equiv::{equivalent, Kind};
use dynes::search::{verify_claims, ClaimConfig};
use dynes::semantics::{ConfigMode, PosetMode};
use dynes::translate::{translate, FreshNamePolicy};
use dynes::{Error, Family, Structure};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DynesStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// The text is not a well-formed structure file.
    Parse = 3,
    /// The structure violates a well-formedness rule.
    Invalid = 4,
    /// The operation is not defined for this family or input.
    Unsupported = 5,
    /// Unknown example, claim, family, mode or kind name.
    UnknownName = 6,
    AlphabetMismatch = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

/// An owned structure.
pub struct DynesStructure {
    inner: Structure,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DynesStatus {
    match e {
        Error::Syntax { .. }
        | Error::UnknownEventAt { .. }
        | Error::ClauseNotAllowed { .. }
        | Error::UnknownEvent(_)
        | Error::InvalidEventName(_)
        | Error::DuplicateEvent(_)
        | Error::AlphabetTooLarge(_) => DynesStatus::Parse,
        Error::Invalid { .. } => DynesStatus::Invalid,
        Error::UnknownExample(_) | Error::UnknownClaim(_) | Error::Usage(_) => {
            DynesStatus::UnknownName
        }
        Error::AlphabetMismatch => DynesStatus::AlphabetMismatch,
        _ => DynesStatus::Unsupported,
    }
}

struct Fail(DynesStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type Res<T> = Result<T, Fail>;

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Res<()>) -> DynesStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DynesStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            DynesStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(DynesStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(DynesStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(p: *const DynesStructure, what: &str) -> Res<&'a Structure> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Res<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Res<()> {
    let c =
        CString::new(s).map_err(|_| Fail(DynesStatus::Internal, "string contains NUL".into()))?;
    put(out, c.into_raw(), "output string pointer")
}

unsafe fn put_structure(out: *mut *mut DynesStructure, s: Structure) -> Res<()> {
    if out.is_null() {
        return Err(null("output structure pointer"));
    }
    out.write(Box::into_raw(Box::new(DynesStructure { inner: s })));
    Ok(())
}

/// The library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dynes_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The message of the last failed call on this thread, or "" after a
/// successful one. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn dynes_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and validates a structure file's text.
///
/// # Safety
/// `text_ptr` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dynes_parse(
    text_ptr: *const c_char,
    out: *mut *mut DynesStructure,
) -> DynesStatus {
    guard(|| {
        let s = dynes::parse_structure(text(text_ptr, "text")?)?;
        put_structure(out, s)
    })
}

/// Loads a bundled example by name.
///
/// # Safety
/// `name` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dynes_load_example(
    name: *const c_char,
    out: *mut *mut DynesStructure,
) -> DynesStatus {
    guard(|| {
        let e = dynes::corpus::load_example(text(name, "name")?)?;
        put_structure(out, e.structure)
    })
}

/// Releases a structure. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dynes_free(s: *mut DynesStructure) {
    if !s.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(s))));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dynes_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes whether the structure is well-formed and, when `out_report` is
/// non-null, its violations one per line.
///
/// # Safety
/// Pointers must be valid; `out_report` may be null.
#[no_mangle]
pub unsafe extern "C" fn dynes_validate(
    s: *const DynesStructure,
    out_ok: *mut bool,
    out_report: *mut *mut c_char,
) -> DynesStatus {
    guard(|| {
        let r = dynes::kernel::validate(handle(s, "structure")?);
        put(out_ok, r.ok, "out_ok")?;
        if !out_report.is_null() {
            let lines: Vec<String> = r.violations.iter().map(|v| v.to_string()).collect();
            put_string(out_report, lines.join("\n"))?;
        }
        Ok(())
    })
}

/// The structure in file syntax.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dynes_serialize(
    s: *const DynesStructure,
    out: *mut *mut c_char,
) -> DynesStatus {
    guard(|| put_string(out, dynes::serialize(handle(s, "structure")?)))
}

/// Traces as JSON, in the command line's schema.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dynes_traces_json(
    s: *const DynesStructure,
    out: *mut *mut c_char,
) -> DynesStatus {
    guard(|| put_string(out, traces_json(handle(s, "structure")?).to_string()))
}

/// Configurations as JSON; step-based when `step` is set.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dynes_configs_json(
    s: *const DynesStructure,
    step: bool,
    out: *mut *mut c_char,
) -> DynesStatus {
    guard(|| {
        let mode = if step {
            ConfigMode::Step
        } else {
            ConfigMode::Trace
        };
        put_string(out, configs_json(handle(s, "structure")?, mode).to_string())
    })
}

/// Reachable steps as JSON.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dynes_transitions_json(
    s: *const DynesStructure,
    out: *mut *mut c_char,
) -> DynesStatus {
    guard(|| put_string(out, transitions_json(handle(s, "structure")?).to_string()))
}

/// The state graph of a DCES as JSON.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dynes_states_json(
    s: *const DynesStructure,
    out: *mut *mut c_char,
) -> DynesStatus {
    guard(|| put_string(out, states_json(handle(s, "structure")?)?.to_string()))
}

/// Posets of one mode (`early`, `late`, ...) as JSON.
///
/// # Safety
/// Pointers must be valid; `mode` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn dynes_posets_json(
    s: *const DynesStructure,
    mode: *const c_char,
    out: *mut *mut c_char,
) -> DynesStatus {
    guard(|| {
        let mode: PosetMode = text(mode, "mode")?.parse()?;
        put_string(out, posets_json(handle(s, "structure")?, mode)?.to_string())
    })
}

/// Translates into the named family (`RCES`, `DES`, `SES`, `DCES`).
///
/// # Safety
/// Pointers must be valid; `family` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn dynes_translate(
    s: *const DynesStructure,
    family: *const c_char,
    out: *mut *mut DynesStructure,
) -> DynesStatus {
    guard(|| {
        let to: Family = text(family, "family")?.parse()?;
        let t = translate(handle(s, "structure")?, to, &FreshNamePolicy::default())?;
        put_structure(out, t)
    })
}

/// Compares two structures under `kind` (`trace`, `config`, `transition`,
/// `state`, `poset:MODE`). A distinguishing witness is written to
/// `out_witness` when they differ and it is non-null; otherwise it is set
/// to null.
///
/// # Safety
/// Pointers must be valid; `out_witness` may be null.
#[no_mangle]
pub unsafe extern "C" fn dynes_equivalent(
    a: *const DynesStructure,
    b: *const DynesStructure,
    kind: *const c_char,
    out_equal: *mut bool,
    out_witness: *mut *mut c_char,
) -> DynesStatus {
    guard(|| {
        let kind: Kind = text(kind, "kind")?.parse()?;
        let v = equivalent(
            handle(a, "first structure")?,
            handle(b, "second structure")?,
            kind,
        )?;
        put(out_equal, v.equal, "out_equal")?;
        if !out_witness.is_null() {
            match v.witness {
                Some(w) => put_string(out_witness, w.to_string())?,
                None => out_witness.write(ptr::null_mut()),
            }
        }
        Ok(())
    })
}

/// Checks one registered claim with default settings. The report (one
/// evidence line per row) goes to `out_report` when non-null.
///
/// # Safety
/// `id` NUL-terminated; `out_passed` writable; `out_report` may be null.
#[no_mangle]
pub unsafe extern "C" fn dynes_verify_claim(
    id: *const c_char,
    out_passed: *mut bool,
    out_report: *mut *mut c_char,
) -> DynesStatus {
    guard(|| {
        let id = text(id, "claim id")?;
        let r = verify_claims(&[id], &ClaimConfig::default())?.remove(0);
        put(out_passed, r.passed, "out_passed")?;
        if !out_report.is_null() {
            let tag = if r.passed { "PASS" } else { "FAIL" };
            let mut lines = vec![format!("{tag} {}: {}", r.id, r.statement)];
            lines.extend(r.evidence);
            put_string(out_report, lines.join("\n"))?;
        }
        Ok(())
    })
}
