//! C ABI over `mgn-core`.
//!
//! Every call returns an [`MgnStatus`]. Results come back as NUL-terminated
//! strings (`"num/den"` for rationals, decimal for integers) allocated here
//! and released with [`mgn_string_free`]. After a failure,
//! [`mgn_last_error_message`] describes it; the message belongs to the
//! calling thread and lives until that thread's next call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use mgn_core::denom::{compute_d, compute_script_d};
use mgn_core::exact::format_fraction;
use mgn_core::npoint::NPointEngine;
use mgn_core::volume::VolumeEngine;
use mgn_core::{Error, MultiIndex};

/// Status codes returned by every `mgn_*` call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MgnStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// Malformed argument, including bad UTF-8 or an unparsable κ index.
    InvalidArgument = 2,
    /// The requested moduli space is unstable.
    Unstable = 3,
    /// Two engines, or an engine and the cache, disagree.
    Disagreement = 4,
    /// A cache file could not be parsed.
    Parse = 5,
    Io = 6,
    /// Unexpected internal failure.
    Internal = 7,
}

/// Opaque engine handle holding both correlator engines and their caches.
pub struct MgnEngine {
    volume: VolumeEngine,
    npoint: NPointEngine,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> MgnStatus {
    match e {
        Error::Unstable { .. } => MgnStatus::Unstable,
        Error::Disagreement { .. } | Error::Inconsistent(_) => MgnStatus::Disagreement,
        Error::Parse { .. } => MgnStatus::Parse,
        Error::Io(_) => MgnStatus::Io,
        Error::InvalidArgument(_) => MgnStatus::InvalidArgument,
        _ => MgnStatus::Internal,
    }
}

enum Failure {
    Null(&'static str),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

/// Runs `body`, storing its string result in `*out`.
fn guarded(out: *mut *mut c_char, body: impl FnOnce() -> Result<String, Failure>) -> MgnStatus {
    if out.is_null() {
        set_error("output pointer is NULL");
        return MgnStatus::NullPointer;
    }
    let status = guarded_status(|| {
        let s = body()?;
        let c = CString::new(s).map_err(|_| Failure::Engine(Error::InvalidArgument("result contains NUL".into())))?;
        // SAFETY: `out` was checked non-null; the caller guarantees it is writable.
        unsafe { *out = c.into_raw() };
        Ok(())
    });
    if status != MgnStatus::Ok {
        // SAFETY: as above.
        unsafe { *out = ptr::null_mut() };
    }
    status
}

fn guarded_status(body: impl FnOnce() -> Result<(), Failure>) -> MgnStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MgnStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} is NULL"));
            MgnStatus::NullPointer
        }
        Ok(Err(Failure::Engine(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            MgnStatus::Internal
        }
    }
}

/// # Safety
/// `eng` must be NULL or a live handle from [`mgn_engine_new`].
unsafe fn engine<'a>(eng: *const MgnEngine) -> Result<&'a MgnEngine, Failure> {
    eng.as_ref().ok_or(Failure::Null("engine"))
}

/// # Safety
/// `s` must be NULL or a NUL-terminated string.
unsafe fn text<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::Engine(Error::InvalidArgument(format!("{what} is not UTF-8"))))
}

/// # Safety
/// `d` must point to `n` readable values, or be NULL with `n == 0`.
unsafe fn exponents<'a>(d: *const u32, n: usize) -> Result<&'a [u32], Failure> {
    if n == 0 {
        return Ok(&[]);
    }
    if d.is_null() {
        return Err(Failure::Null("exponent array"));
    }
    Ok(std::slice::from_raw_parts(d, n))
}

fn multiindex(s: &str) -> Result<MultiIndex, Failure> {
    Ok(s.parse::<MultiIndex>()?)
}

/// New engine with empty caches. Never NULL.
#[no_mangle]
pub extern "C" fn mgn_engine_new() -> *mut MgnEngine {
    Box::into_raw(Box::new(MgnEngine { volume: VolumeEngine::new(), npoint: NPointEngine::new() }))
}

/// Releases an engine. NULL is ignored.
///
/// # Safety
/// `eng` must be NULL or a handle from [`mgn_engine_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mgn_engine_free(eng: *mut MgnEngine) {
    if !eng.is_null() {
        drop(Box::from_raw(eng));
    }
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from an `mgn_*` call not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mgn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or NULL.
#[no_mangle]
pub extern "C" fn mgn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn mgn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `<τ_{d_1}…τ_{d_n}>_g`, computed by the τ/κ recursion and checked against
/// the n-point engine. Zero off the dimension constraint.
///
/// # Safety
/// `eng` is a live handle, `d` points to `n` values (`n ≥ 1`), `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mgn_psi_correlator(eng: *const MgnEngine, genus: u32, d: *const u32, n: usize, out: *mut *mut c_char) -> MgnStatus {
    guarded(out, || {
        let eng = engine(eng)?;
        let d = exponents(d, n)?;
        let value = eng.volume.psi_correlator_wk(genus, d)?;
        let other = eng.npoint.psi_correlator(genus, d);
        if value != other {
            return Err(Error::Disagreement {
                key: format!("g={genus} d={d:?}"),
                stored: format_fraction(&value),
                stored_by: "recursion".into(),
                computed: format_fraction(&other),
                computed_by: "n-point".into(),
            }
            .into());
        }
        Ok(format_fraction(&value))
    })
}

/// `<κ(b) τ_{d_1}…τ_{d_n}>_g` with `b` written as `"1:2,2:1"` (empty for
/// no κ classes). `n` may be 0 when `genus ≥ 2`.
///
/// # Safety
/// As [`mgn_psi_correlator`]; `b` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mgn_kappa_correlator(
    eng: *const MgnEngine,
    genus: u32,
    d: *const u32,
    n: usize,
    b: *const c_char,
    out: *mut *mut c_char,
) -> MgnStatus {
    guarded(out, || {
        let eng = engine(eng)?;
        let d = exponents(d, n)?;
        let b = multiindex(text(b, "kappa index")?)?;
        if d.is_empty() {
            return Ok(format_fraction(&eng.volume.pure_kappa_volume(genus, &b)?));
        }
        Ok(format_fraction(&eng.volume.mixed_correlator(genus, d, &b)?))
    })
}

/// `<κ(b)>_g` on `M̄_g`, `g ≥ 2`.
///
/// # Safety
/// `eng` is a live handle, `b` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mgn_pure_kappa_volume(eng: *const MgnEngine, genus: u32, b: *const c_char, out: *mut *mut c_char) -> MgnStatus {
    guarded(out, || {
        let eng = engine(eng)?;
        let b = multiindex(text(b, "kappa index")?)?;
        Ok(format_fraction(&eng.volume.pure_kappa_volume(genus, &b)?))
    })
}

/// `D_{g,n}` as a decimal string.
///
/// # Safety
/// `eng` is a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mgn_denominator(eng: *const MgnEngine, genus: u32, n: usize, out: *mut *mut c_char) -> MgnStatus {
    guarded(out, || Ok(compute_d(&engine(eng)?.npoint, genus, n)?.value.to_string()))
}

/// `𝒟_g` as a decimal string; fails with `Disagreement` if the κ definition
/// and `D_{g,3g−3}` differ.
///
/// # Safety
/// `eng` is a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mgn_script_denominator(eng: *const MgnEngine, genus: u32, out: *mut *mut c_char) -> MgnStatus {
    guarded(out, || {
        let eng = engine(eng)?;
        Ok(compute_script_d(&eng.volume, &eng.npoint, genus)?.value.to_string())
    })
}

/// Merges a cache file into the engine. `count` (may be NULL) receives the
/// number of records read.
///
/// # Safety
/// `eng` is a live handle, `path` a NUL-terminated string, `count` NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mgn_cache_load(eng: *const MgnEngine, path: *const c_char, count: *mut usize) -> MgnStatus {
    guarded_status(|| {
        let eng = engine(eng)?;
        let n = eng.volume.table().load(Path::new(text(path, "path")?))?;
        if !count.is_null() {
            *count = n;
        }
        Ok(())
    })
}

/// Writes every cached correlator to `path`, replacing it.
///
/// # Safety
/// `eng` is a live handle, `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mgn_cache_save(eng: *const MgnEngine, path: *const c_char) -> MgnStatus {
    guarded_status(|| {
        let eng = engine(eng)?;
        eng.volume.table().save(Path::new(text(path, "path")?))?;
        Ok(())
    })
}

/// Number of cached correlators.
///
/// # Safety
/// `eng` is NULL (returns 0) or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mgn_cache_len(eng: *const MgnEngine) -> usize {
    eng.as_ref().map_or(0, |e| e.volume.table().len())
}
