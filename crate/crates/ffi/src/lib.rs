//! C ABI over `xisp-core`.
//!
//! Vectors and coding registries are opaque handles owned by the caller and
//! released with their `_free` function. Every fallible call returns an
//! [`XispStatus`]; on failure [`xisp_last_error`] describes the error for the
//! calling thread. Strings returned through `char **` outputs are
//! NUL-terminated UTF-8 and must be released with [`xisp_string_free`].
//! Rationals cross the boundary as `"p/q"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use xisp::constructions::{build_exact_pair, PairKind};
use xisp::functionals::{Mode, SigmaRegistry, SpaceConfig};
use xisp::normsearch::{norm_certificate, Budget, SearchContext};
use xisp::num::{fmt_q, parse_q, Nat};
use xisp::scc::{generate_basic_scc, validate_basic_scc, IndexStream, SccBudget};
use xisp::schreier::is_member;
use xisp::tsirelson::tsirelson_norm;
use xisp::vectors::RationalVector;
use xisp::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XispStatus {
    Ok = 0,
    MalformedInput = 1,
    NotSuccessive = 2,
    EmptyVector = 3,
    SupportTooLarge = 4,
    Infeasible = 5,
    PsiProjectionInvalid = 6,
    NotTypeI = 7,
    NotTypeII = 8,
    ConstructionInvariantViolated = 9,
    MalformedInstance = 10,
    VerificationFailed = 11,
    Io = 12,
    NullPointer = 13,
    Panic = 14,
}

/// Parameter regime of the space.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XispMode {
    Scaled = 0,
    Faithful = 1,
}

/// Finitely supported vector with rational entries.
pub struct XispVector(RationalVector);

/// Coding registry together with the space configuration it was opened for.
pub struct XispRegistry {
    registry: SigmaRegistry,
    config: SpaceConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn status_of(e: &Error) -> XispStatus {
    match e {
        Error::Malformed(_) => XispStatus::MalformedInput,
        Error::NotSuccessive { .. } => XispStatus::NotSuccessive,
        Error::EmptyVector => XispStatus::EmptyVector,
        Error::SupportTooLarge { .. } => XispStatus::SupportTooLarge,
        Error::Infeasible { .. } => XispStatus::Infeasible,
        Error::PsiProjectionInvalid(_) => XispStatus::PsiProjectionInvalid,
        Error::NotTypeI => XispStatus::NotTypeI,
        Error::NotTypeII => XispStatus::NotTypeII,
        Error::ConstructionInvariantViolated(_) => XispStatus::ConstructionInvariantViolated,
        Error::MalformedInstance(_) => XispStatus::MalformedInstance,
        Error::VerificationFailed(_) => XispStatus::VerificationFailed,
        Error::Io(_) => XispStatus::Io,
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

enum Failure {
    Core(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Core(e.into())
    }
}

type FfiResult<T> = Result<T, Failure>;

/// Runs `body`, translating errors and panics into a status.
fn guard(body: impl FnOnce() -> FfiResult<()>) -> XispStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => XispStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_last_error(format!("{}: {e}", e.code()));
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            XispStatus::NullPointer
        }
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            set_last_error(format!("panic: {}", msg.unwrap_or_default()));
            XispStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Error::malformed(format!("{what} is not UTF-8")).into())
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &'static str) -> FfiResult<&'a T> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let c = CString::new(s).map_err(|_| Error::malformed("output contains NUL"))?;
    write_out(out, c.into_raw(), "out")
}

fn config_of(mode: XispMode) -> SpaceConfig {
    SpaceConfig::new(match mode {
        XispMode::Scaled => Mode::Scaled,
        XispMode::Faithful => Mode::Faithful,
    })
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn xisp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Stable kebab-case name of a status, as used by the command line tool.
#[no_mangle]
pub extern "C" fn xisp_status_name(status: XispStatus) -> *const c_char {
    let s: &'static CStr = match status {
        XispStatus::Ok => c"ok",
        XispStatus::MalformedInput => c"malformed-input",
        XispStatus::NotSuccessive => c"not-successive",
        XispStatus::EmptyVector => c"empty-vector",
        XispStatus::SupportTooLarge => c"support-too-large",
        XispStatus::Infeasible => c"infeasible-at-budget",
        XispStatus::PsiProjectionInvalid => c"psi-projection-invalid",
        XispStatus::NotTypeI => c"not-type-I",
        XispStatus::NotTypeII => c"not-type-II",
        XispStatus::ConstructionInvariantViolated => c"construction-invariant-violated",
        XispStatus::MalformedInstance => c"malformed-instance",
        XispStatus::VerificationFailed => c"verification-failed",
        XispStatus::Io => c"io-error",
        XispStatus::NullPointer => c"null-pointer",
        XispStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn xisp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"entries": [["i", "p/q"], ...]}` into a new vector.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xisp_vector_from_json(json: *const c_char, out: *mut *mut XispVector) -> XispStatus {
    guard(|| {
        let v: RationalVector = serde_json::from_str(str_arg(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(XispVector(v))), "out")
    })
}

/// Builds a vector from parallel arrays of indices and `"p/q"` strings.
///
/// # Safety
/// `indices` and `values` must each point to `len` readable elements.
#[no_mangle]
pub unsafe extern "C" fn xisp_vector_new(indices: *const u64, values: *const *const c_char, len: usize, out: *mut *mut XispVector) -> XispStatus {
    guard(|| {
        if len > 0 && (indices.is_null() || values.is_null()) {
            return Err(Failure::Null("indices/values"));
        }
        let mut entries = Vec::with_capacity(len);
        for k in 0..len {
            entries.push((Nat::from(*indices.add(k)), parse_q(str_arg(*values.add(k), "value")?)?));
        }
        let v = RationalVector::from_entries(entries)?;
        write_out(out, Box::into_raw(Box::new(XispVector(v))), "out")
    })
}

/// Serialises a vector to JSON.
///
/// # Safety
/// `v` must be a live vector handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xisp_vector_to_json(v: *const XispVector, out: *mut *mut c_char) -> XispStatus {
    guard(|| write_string(out, serde_json::to_string(&ref_arg(v, "vector")?.0)?))
}

/// Number of nonzero entries; 0 for NULL.
///
/// # Safety
/// `v` must be NULL or a live vector handle.
#[no_mangle]
pub unsafe extern "C" fn xisp_vector_support_size(v: *const XispVector) -> usize {
    v.as_ref().map_or(0, |v| v.0.support().len())
}

/// Releases a vector. NULL is ignored.
///
/// # Safety
/// `v` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn xisp_vector_free(v: *mut XispVector) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Exact Tsirelson norm as a `"p/q"` string.
///
/// # Safety
/// `v` must be a live vector handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xisp_tnorm(v: *const XispVector, out: *mut *mut c_char) -> XispStatus {
    guard(|| {
        let r = tsirelson_norm(&ref_arg(v, "vector")?.0)?;
        write_string(out, fmt_q(&r.value))
    })
}

/// Certified norm interval as a JSON certificate. `registry` may be NULL, in
/// which case no special functionals are available to the search.
///
/// # Safety
/// Handles must be live or NULL where allowed; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xisp_norm_certificate(
    v: *const XispVector,
    registry: *const XispRegistry,
    mode: XispMode,
    depth: usize,
    children: usize,
    sizes: usize,
    out: *mut *mut c_char,
) -> XispStatus {
    guard(|| {
        let v = &ref_arg(v, "vector")?.0;
        let reg = registry.as_ref();
        let config = reg.map_or(config_of(mode), |r| r.config);
        let cx = SearchContext { registry: reg.map(|r| &r.registry), blocks: None, hints: vec![] };
        let cert = norm_certificate(v, Budget { depth, children, sizes }, config, &cx)?;
        cert.verify_with(config, cx.registry).map_err(Error::VerificationFailed)?;
        write_string(out, serde_json::to_string(&cert)?)
    })
}

/// Membership of the set `{set[0], ..., set[len-1]}` in `S_n`.
///
/// # Safety
/// `set` must point to `len` readable elements; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xisp_schreier_member(set: *const u64, len: usize, n: u32, out: *mut bool) -> XispStatus {
    guard(|| {
        if len > 0 && set.is_null() {
            return Err(Failure::Null("set"));
        }
        let mut xs: Vec<Nat> = (0..len).map(|k| Nat::from(*set.add(k))).collect();
        xs.sort();
        xs.dedup();
        if xs.first().is_some_and(|x| *x == Nat::from(0u8)) {
            return Err(Error::malformed("indices start at 1").into());
        }
        write_out(out, is_member(&xs, n)?.is_some(), "out")
    })
}

/// Generates an `(n, eps)` basic special convex combination on the stream
/// `start, start + step, ...` and returns its validated descriptor as JSON.
///
/// # Safety
/// `eps` must be a NUL-terminated `"p/q"` string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xisp_scc(n: u32, eps: *const c_char, start: u64, step: u64, out: *mut *mut c_char) -> XispStatus {
    guard(|| {
        let eps = parse_q(str_arg(eps, "eps")?)?;
        let stream = IndexStream::Arithmetic { from: Nat::from(start), step: Nat::from(step) };
        let d = generate_basic_scc(&stream, n, &eps, SccBudget::default())?;
        let report = validate_basic_scc(&d.coefficients, d.n, &d.eps)?;
        if !report.valid {
            return Err(Error::VerificationFailed("generated combination did not validate".into()).into());
        }
        write_string(out, serde_json::to_string(&d)?)
    })
}

/// Empty coding registry.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xisp_registry_new(mode: XispMode, out: *mut *mut XispRegistry) -> XispStatus {
    guard(|| {
        let config = config_of(mode);
        write_out(out, Box::into_raw(Box::new(XispRegistry { registry: SigmaRegistry::new(config), config })), "out")
    })
}

/// Opens a registry file, or starts an empty one if the file is missing.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xisp_registry_open(path: *const c_char, mode: XispMode, out: *mut *mut XispRegistry) -> XispStatus {
    guard(|| {
        let config = config_of(mode);
        let registry = SigmaRegistry::open(&PathBuf::from(str_arg(path, "path")?), config)?;
        write_out(out, Box::into_raw(Box::new(XispRegistry { registry, config })), "out")
    })
}

/// Writes the registry to `path`.
///
/// # Safety
/// `r` must be a live registry handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn xisp_registry_save(r: *const XispRegistry, path: *const c_char) -> XispStatus {
    guard(|| Ok(ref_arg(r, "registry")?.registry.save(&PathBuf::from(str_arg(path, "path")?))?))
}

/// Releases a registry. NULL is ignored.
///
/// # Safety
/// `r` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn xisp_registry_free(r: *mut XispRegistry) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Builds an exact pair of weight `n` and kind 0 or 1 starting at `start`,
/// recording its codings in `r`, and returns the pair as JSON.
///
/// # Safety
/// `r` must be a live registry handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xisp_build_exact_pair(r: *mut XispRegistry, n: u32, kind: u8, start: u64, out: *mut *mut c_char) -> XispStatus {
    guard(|| {
        let r = r.as_mut().ok_or(Failure::Null("registry"))?;
        let p = build_exact_pair(n, PairKind::from_u8(kind)?, &Nat::from(start), r.config, Some(&mut r.registry))?;
        write_string(out, serde_json::to_string(&p)?)
    })
}
