//! C ABI over the treerank engine.
//!
//! Objects are opaque handles created by `tr_*_new`/`tr_*_random` style
//! constructors and released with the matching `tr_*_free`. Every fallible
//! call returns a [`TrStatus`]; on failure `tr_last_error_message` describes
//! the error until the next call on the same thread. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treerank::experiments::WitnessCertificate;
use treerank::field::PrimeField;
use treerank::geometry::{quadric_normal_form, random_hypersurface, Hypersurface};
use treerank::hilbert::ConditionSystem;
use treerank::poly::Form;
use treerank::trees::{random_tree, Curve, TreeConstraints, TreeCurve, TreeType};
use treerank::Error;

/// Result codes. `TR_OK` is zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrStatus {
    TrOk = 0,
    TrNullArgument = 1,
    TrInvalidArgument = 2,
    TrBadPrime = 3,
    TrNotATree = 4,
    TrComponentContained = 5,
    TrRetryExhausted = 6,
    TrSearchExhausted = 7,
    TrSchemaMismatch = 8,
    TrReplayDivergence = 9,
    TrSerde = 10,
    TrInvariantViolation = 11,
    TrInternal = 12,
    TrPanic = 13,
}

/// Cohomology of the ideal of `Y ∩ W` in one degree.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrCohomology {
    pub h0: u64,
    pub h1: u64,
    pub rank: u64,
    pub h0_sheaf_of_ow: u64,
    /// 1 when `h0 == 0 || h1 == 0`.
    pub maximal_rank: u8,
}

/// A hypersurface over F_p.
pub struct TrHypersurface {
    inner: Hypersurface,
}

/// A tree of lines.
pub struct TrTree {
    inner: TreeCurve,
}

/// A witness certificate.
pub struct TrCertificate {
    inner: WitnessCertificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TrStatus {
    match e {
        Error::BadPrime(_) => TrStatus::TrBadPrime,
        Error::NotATree(_) => TrStatus::TrNotATree,
        Error::ComponentContained(_) => TrStatus::TrComponentContained,
        Error::RetryExhausted { .. } => TrStatus::TrRetryExhausted,
        Error::SearchExhausted { .. } => TrStatus::TrSearchExhausted,
        Error::SchemaMismatch { .. } => TrStatus::TrSchemaMismatch,
        Error::ReplayDivergence(_) => TrStatus::TrReplayDivergence,
        Error::Serde(_) => TrStatus::TrSerde,
        Error::InvariantViolation(_) => TrStatus::TrInvariantViolation,
        Error::Io(_) => TrStatus::TrInternal,
        _ => TrStatus::TrInvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (TrStatus, String)>) -> TrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TrStatus::TrOk,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside treerank".into());
            TrStatus::TrPanic
        }
    }
}

fn lift(e: Error) -> (TrStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TrStatus, String) {
    (TrStatus::TrNullArgument, format!("{what} is null"))
}

fn field(p: u64) -> Result<PrimeField, (TrStatus, String)> {
    PrimeField::new(p).map_err(lift)
}

unsafe fn out_ptr<'a, T>(out: *mut *mut T) -> Result<&'a mut *mut T, (TrStatus, String)> {
    // SAFETY: caller passes a valid pointer or null
    unsafe { out.as_mut() }.ok_or_else(|| null("out"))
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library from this thread.
#[no_mangle]
pub extern "C" fn tr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Random degree-`k` hypersurface in P^n over F_p, from `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn tr_hypersurface_random(
    p: u64,
    n: usize,
    k: u32,
    seed: u64,
    out: *mut *mut TrHypersurface,
) -> TrStatus {
    guard(|| {
        let out = unsafe { out_ptr(out)? };
        if n == 0 || k == 0 {
            return Err((TrStatus::TrInvalidArgument, "need n >= 1 and k >= 1".into()));
        }
        let f = field(p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inner = random_hypersurface(f, n, k, &mut rng);
        *out = Box::into_raw(Box::new(TrHypersurface { inner }));
        Ok(())
    })
}

/// The normal-form quadric of rank `rank` in P^n.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn tr_hypersurface_quadric(
    p: u64,
    n: usize,
    rank: usize,
    out: *mut *mut TrHypersurface,
) -> TrStatus {
    guard(|| {
        let out = unsafe { out_ptr(out)? };
        let inner = quadric_normal_form(field(p)?, n, rank)
            .map_err(lift)?
            .hypersurface;
        *out = Box::into_raw(Box::new(TrHypersurface { inner }));
        Ok(())
    })
}

/// A hypersurface from its `C(n+k, n)` coefficients in graded-lex order.
///
/// # Safety
/// `coeffs` must point to `len` readable values; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn tr_hypersurface_from_coeffs(
    p: u64,
    n: usize,
    k: u32,
    coeffs: *const u64,
    len: usize,
    out: *mut *mut TrHypersurface,
) -> TrStatus {
    guard(|| {
        let out = unsafe { out_ptr(out)? };
        if coeffs.is_null() {
            return Err(null("coeffs"));
        }
        // SAFETY: caller guarantees `len` readable elements
        let c = unsafe { std::slice::from_raw_parts(coeffs, len) }.to_vec();
        let form = Form::from_coeffs(field(p)?, n, k, c).map_err(lift)?;
        let inner = Hypersurface::new(form).map_err(lift)?;
        *out = Box::into_raw(Box::new(TrHypersurface { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from a `tr_hypersurface_*` constructor that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn tr_hypersurface_free(h: *mut TrHypersurface) {
    if !h.is_null() {
        // SAFETY: ownership returns to Rust exactly once
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Random tree of the type whose parents are `tau[0..len]` (1-based, for
/// lines `2..=len+1`), transversal to `h`.
///
/// # Safety
/// `h` must be a live handle, `tau` must point to `len` readable values
/// (it may be null when `len == 0`), `out` as above.
#[no_mangle]
pub unsafe extern "C" fn tr_tree_random(
    h: *const TrHypersurface,
    tau: *const usize,
    len: usize,
    seed: u64,
    out: *mut *mut TrTree,
) -> TrStatus {
    guard(|| {
        let out = unsafe { out_ptr(out)? };
        // SAFETY: caller guarantees a live handle or null
        let h = unsafe { h.as_ref() }.ok_or_else(|| null("hypersurface"))?;
        let parents = if len == 0 {
            Vec::new()
        } else if tau.is_null() {
            return Err(null("tau"));
        } else {
            // SAFETY: caller guarantees `len` readable elements
            unsafe { std::slice::from_raw_parts(tau, len) }.to_vec()
        };
        let ttype = TreeType::new(len + 1, parents).map_err(lift)?;
        let w = &h.inner;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inner = random_tree(
            &ttype,
            w.field(),
            w.ambient_dim(),
            &mut rng,
            &TreeConstraints::transversal(w),
        )
        .map_err(lift)?;
        *out = Box::into_raw(Box::new(TrTree { inner }));
        Ok(())
    })
}

/// Number of lines, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live tree handle.
#[no_mangle]
pub unsafe extern "C" fn tr_tree_degree(t: *const TrTree) -> usize {
    // SAFETY: caller guarantees a live handle or null
    unsafe { t.as_ref() }.map_or(0, |t| t.inner.degree())
}

/// # Safety
/// `t` must be null or a live tree handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn tr_tree_free(t: *mut TrTree) {
    if !t.is_null() {
        // SAFETY: ownership returns to Rust exactly once
        drop(unsafe { Box::from_raw(t) });
    }
}

/// `h^0` and `h^1` of the ideal of `tree ∩ h` on `h`, twisted by `t`.
///
/// # Safety
/// `h` and `tree` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tr_cohomology(
    h: *const TrHypersurface,
    tree: *const TrTree,
    t: u32,
    out: *mut TrCohomology,
) -> TrStatus {
    guard(|| {
        // SAFETY: caller guarantees live handles or null
        let (h, tree, out) = unsafe { (h.as_ref(), tree.as_ref(), out.as_mut()) };
        let h = h.ok_or_else(|| null("hypersurface"))?;
        let tree = tree.ok_or_else(|| null("tree"))?;
        let out = out.ok_or_else(|| null("out"))?;
        let curve = Curve::Tree(tree.inner.clone());
        let pair = ConditionSystem::new(&h.inner, &curve)
            .and_then(|s| s.cohomology(t))
            .map_err(lift)?;
        *out = TrCohomology {
            h0: pair.h0 as u64,
            h1: pair.h1 as u64,
            rank: pair.rank as u64,
            h0_sheaf_of_ow: pair.h0_sheaf_of_ow as u64,
            maximal_rank: pair.is_maximal_rank() as u8,
        };
        Ok(())
    })
}

/// Certificate for `tree ∩ h` over twists `[t_min, t_max]`.
///
/// # Safety
/// `h` and `tree` must be live handles; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn tr_certificate_new(
    h: *const TrHypersurface,
    tree: *const TrTree,
    t_min: u32,
    t_max: u32,
    seed: u64,
    out: *mut *mut TrCertificate,
) -> TrStatus {
    guard(|| {
        let out = unsafe { out_ptr(out)? };
        // SAFETY: caller guarantees live handles or null
        let (h, tree) = unsafe { (h.as_ref(), tree.as_ref()) };
        let h = h.ok_or_else(|| null("hypersurface"))?;
        let tree = tree.ok_or_else(|| null("tree"))?;
        if t_min > t_max {
            return Err((TrStatus::TrInvalidArgument, "t_min > t_max".into()));
        }
        let curve = Curve::Tree(tree.inner.clone());
        let profile = ConditionSystem::new(&h.inner, &curve)
            .and_then(|s| s.profile(Some(t_min..=t_max), false))
            .map_err(lift)?;
        let inner = WitnessCertificate::new("ffi", seed, &h.inner, &curve, t_min..=t_max, profile)
            .map_err(lift)?;
        *out = Box::into_raw(Box::new(TrCertificate { inner }));
        Ok(())
    })
}

/// Parses a certificate from NUL-terminated JSON.
///
/// # Safety
/// `json` must be a valid C string; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn tr_certificate_from_json(
    json: *const c_char,
    out: *mut *mut TrCertificate,
) -> TrStatus {
    guard(|| {
        let out = unsafe { out_ptr(out)? };
        if json.is_null() {
            return Err(null("json"));
        }
        // SAFETY: caller guarantees a NUL-terminated string
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| (TrStatus::TrInvalidArgument, e.to_string()))?;
        let inner = WitnessCertificate::from_json(text).map_err(lift)?;
        *out = Box::into_raw(Box::new(TrCertificate { inner }));
        Ok(())
    })
}

/// Serializes a certificate. Release the string with [`tr_string_free`].
///
/// # Safety
/// `cert` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tr_certificate_to_json(
    cert: *const TrCertificate,
    out: *mut *mut c_char,
) -> TrStatus {
    guard(|| {
        let out = unsafe { out_ptr(out)? };
        // SAFETY: caller guarantees a live handle or null
        let cert = unsafe { cert.as_ref() }.ok_or_else(|| null("certificate"))?;
        let text = cert.inner.to_json().map_err(lift)?;
        *out = CString::new(text)
            .map_err(|e| (TrStatus::TrInternal, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// Recomputes the certificate; `*maximal_rank` is set to 1 when the
/// replayed profile is maximal rank at every twist.
///
/// # Safety
/// `cert` must be a live handle; `maximal_rank` writable.
#[no_mangle]
pub unsafe extern "C" fn tr_certificate_replay(
    cert: *const TrCertificate,
    maximal_rank: *mut u8,
) -> TrStatus {
    guard(|| {
        // SAFETY: caller guarantees a live handle or null
        let (cert, flag) = unsafe { (cert.as_ref(), maximal_rank.as_mut()) };
        let cert = cert.ok_or_else(|| null("certificate"))?;
        let flag = flag.ok_or_else(|| null("maximal_rank"))?;
        let verdict = cert.inner.replay().map_err(lift)?;
        *flag = (verdict == treerank::hilbert::Verdict::MaximalRank) as u8;
        Ok(())
    })
}

/// # Safety
/// `cert` must be null or a live handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn tr_certificate_free(cert: *mut TrCertificate) {
    if !cert.is_null() {
        // SAFETY: ownership returns to Rust exactly once
        drop(unsafe { Box::from_raw(cert) });
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tr_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: `s` came from `CString::into_raw`
        drop(unsafe { CString::from_raw(s) });
    }
}
