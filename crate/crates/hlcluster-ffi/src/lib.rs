//! C ABI over tracked seeds, generalized HL monomials and the arrow suite.
//!
//! Every call returns an [`HlStatus`]. On failure the message is kept per thread and
//! can be fetched with [`hl_last_error`]. Strings handed out by this library must be
//! released with [`hl_string_free`], seeds with [`hl_seed_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;
use std::slice;

use hlcluster::gridseeds::{initial_seed, TrackedSeed};
use hlcluster::heights::HeightFunction;
use hlcluster::hl::{ghl_monomial, q_xi_seed, GhlSpec};
use hlcluster::verify::verify_lemma_arrows;
use hlcluster::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NoSuchVertex = 3,
    FrozenVertex = 4,
    Incomparable = 5,
    Internal = 6,
}

/// Opaque tracked seed.
pub struct HlSeed {
    inner: TrackedSeed,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: HlStatus, msg: impl Into<String>) -> HlStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> HlStatus {
    let status = match e {
        Error::NoSuchVertex(_) => HlStatus::NoSuchVertex,
        Error::FrozenVertex(_) => HlStatus::FrozenVertex,
        Error::Incomparable { .. } => HlStatus::Incomparable,
        Error::InexactDivision(_) | Error::CapExceeded(_) | Error::NoTermination(_) => HlStatus::Internal,
        _ => HlStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

unsafe fn read_slice<'a, T>(p: *const T, len: usize) -> Option<&'a [T]> {
    if len == 0 {
        return Some(&[]);
    }
    if p.is_null() {
        return None;
    }
    Some(slice::from_raw_parts(p, len))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> HlStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            HlStatus::Ok
        }
        Err(_) => fail(HlStatus::Internal, "string contains a NUL byte"),
    }
}

unsafe fn boxed_seed(out: *mut *mut HlSeed, r: hlcluster::Result<TrackedSeed>) -> HlStatus {
    match r {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(HlSeed { inner }));
            HlStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// The last error message on this thread as a new string, or NULL when the last call
/// succeeded. Free it with [`hl_string_free`].
#[no_mangle]
pub extern "C" fn hl_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` is NULL or a string returned by this library that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn hl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Q_xi labeled at depth `r`.
///
/// # Safety
/// `xi` points to `n` readable values and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hl_seed_from_xi(xi: *const i64, n: usize, r: i64, out: *mut *mut HlSeed) -> HlStatus {
    clear_error();
    if out.is_null() {
        return fail(HlStatus::NullPointer, "out is NULL");
    }
    let Some(values) = read_slice(xi, n) else {
        return fail(HlStatus::NullPointer, "xi is NULL");
    };
    boxed_seed(out, HeightFunction::new(values.to_vec()).and_then(|x| q_xi_seed(&x, r)))
}

/// The initial grid seed on `n` columns and `ell + 1` rows.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hl_seed_grid(n: usize, ell: i64, out: *mut *mut HlSeed) -> HlStatus {
    clear_error();
    if out.is_null() {
        return fail(HlStatus::NullPointer, "out is NULL");
    }
    boxed_seed(out, initial_seed(n, ell))
}

/// # Safety
/// `seed` is NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hl_seed_free(seed: *mut HlSeed) {
    if !seed.is_null() {
        drop(Box::from_raw(seed));
    }
}

unsafe fn vertex_name<'a>(v: *const c_char) -> Result<&'a str, HlStatus> {
    if v.is_null() {
        return Err(fail(HlStatus::NullPointer, "vertex is NULL"));
    }
    CStr::from_ptr(v).to_str().map_err(|_| fail(HlStatus::InvalidArgument, "vertex is not UTF-8"))
}

/// # Safety
/// `seed` is a live handle and `vertex` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hl_seed_mutate(seed: *mut HlSeed, vertex: *const c_char) -> HlStatus {
    clear_error();
    let Some(s) = seed.as_mut() else {
        return fail(HlStatus::NullPointer, "seed is NULL");
    };
    let v = match vertex_name(vertex) {
        Ok(v) => v,
        Err(st) => return st,
    };
    match s.inner.mutate(v) {
        Ok(_) => HlStatus::Ok,
        Err(e) => from_error(e),
    }
}

/// Reverts the last mutation; `*undone` is set to 0 when the log was empty.
///
/// # Safety
/// `seed` is a live handle and `undone` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hl_seed_undo(seed: *mut HlSeed, undone: *mut i32) -> HlStatus {
    clear_error();
    let Some(s) = seed.as_mut() else {
        return fail(HlStatus::NullPointer, "seed is NULL");
    };
    match s.inner.undo() {
        Ok(rec) => {
            if !undone.is_null() {
                *undone = rec.is_some() as i32;
            }
            HlStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Number of exchange records in the seed's log.
///
/// # Safety
/// `seed` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_seed_log_len(seed: *const HlSeed) -> usize {
    seed.as_ref().map_or(0, |s| s.inner.log.len())
}

/// The seed as JSON: quiver, labels and exchange log.
///
/// # Safety
/// `seed` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hl_seed_to_json(seed: *const HlSeed, out: *mut *mut c_char) -> HlStatus {
    clear_error();
    let (Some(s), false) = (seed.as_ref(), out.is_null()) else {
        return fail(HlStatus::NullPointer, "seed or out is NULL");
    };
    match serde_json::to_string(&s.inner.to_json_value()) {
        Ok(j) => write_string(out, j),
        Err(e) => fail(HlStatus::Internal, e.to_string()),
    }
}

/// The label at `vertex`, printed as a monomial.
///
/// # Safety
/// `seed` is a live handle, `vertex` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_seed_label(seed: *const HlSeed, vertex: *const c_char, out: *mut *mut c_char) -> HlStatus {
    clear_error();
    let (Some(s), false) = (seed.as_ref(), out.is_null()) else {
        return fail(HlStatus::NullPointer, "seed or out is NULL");
    };
    let v = match vertex_name(vertex) {
        Ok(v) => v,
        Err(st) => return st,
    };
    match s.inner.label(v) {
        Ok(m) => write_string(out, m.to_string()),
        Err(e) => from_error(e),
    }
}

/// The generalized HL monomial for `k` factors at depth `r`.
///
/// # Safety
/// `idx`, `as_` and `rs` each point to `k` readable values and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hl_ghl_monomial(
    idx: *const usize,
    as_: *const i64,
    rs: *const i64,
    k: usize,
    r: i64,
    out: *mut *mut c_char,
) -> HlStatus {
    clear_error();
    if out.is_null() {
        return fail(HlStatus::NullPointer, "out is NULL");
    }
    let (Some(idx), Some(as_), Some(rs)) = (read_slice(idx, k), read_slice(as_, k), read_slice(rs, k)) else {
        return fail(HlStatus::NullPointer, "input array is NULL");
    };
    match ghl_monomial(&GhlSpec::new(idx, as_, r, rs)) {
        Ok(m) => write_string(out, m.to_string()),
        Err(e) => from_error(e),
    }
}

/// Runs the arrow suite on one height function; `*passed` is 1 when every check holds.
///
/// # Safety
/// `xi` points to `n` readable values and `passed` is writable.
#[no_mangle]
pub unsafe extern "C" fn hl_verify_arrows(xi: *const i64, n: usize, passed: *mut i32) -> HlStatus {
    clear_error();
    if passed.is_null() {
        return fail(HlStatus::NullPointer, "passed is NULL");
    }
    let Some(values) = read_slice(xi, n) else {
        return fail(HlStatus::NullPointer, "xi is NULL");
    };
    match HeightFunction::new(values.to_vec()) {
        Ok(x) => {
            *passed = verify_lemma_arrows(&x).passed as i32;
            HlStatus::Ok
        }
        Err(e) => from_error(e),
    }
}
