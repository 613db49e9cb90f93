//! C interface: an opaque zero-cache handle, plain-data domain descriptors
//! and integer status codes. Every call returns a [`PolyaStatus`]; on failure
//! the message is kept per thread and read with [`polya_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polya_core::phase::PhaseError;
use polya_core::special::{self, EvalPolicy, SpecialError};
use polya_core::spectra::{self, Bc, DomainSpec, Shape, SpectraError, Verdict};
use polya_core::zeros::{ZeroCache, ZeroError, ZeroKind};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    /// A zero or eigenvalue sits on the threshold within tolerance.
    AmbiguousTie = 4,
    NumericalFailure = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyaVerdict {
    Pass = 0,
    Fail = 1,
    TieAmbiguous = 2,
}

pub const POLYA_SHAPE_SECTOR: u32 = 0;
pub const POLYA_SHAPE_BALL: u32 = 1;
pub const POLYA_BC_DIRICHLET: u32 = 0;
pub const POLYA_BC_NEUMANN: u32 = 1;

/// A domain: `shape` is `POLYA_SHAPE_SECTOR` (angle `alpha`) or
/// `POLYA_SHAPE_BALL` (dimension `dim`, 2 for the disk); `bc` is one of the
/// `POLYA_BC_*` constants.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PolyaDomain {
    pub shape: u32,
    pub alpha: f64,
    pub dim: u32,
    pub bc: u32,
}

/// Opaque memo of Bessel zero tables. Safe to share between threads.
pub struct PolyaZeroCache {
    inner: ZeroCache,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend(msg.bytes().filter(|&b| b != 0));
    });
}

type Outcome<T> = Result<T, (PolyaStatus, String)>;

fn guarded(f: impl FnOnce() -> Outcome<()>) -> PolyaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PolyaStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PolyaStatus::Panic
        }
    }
}

fn special_status(e: &SpecialError) -> PolyaStatus {
    match e {
        SpecialError::NonConvergence { .. } => PolyaStatus::NumericalFailure,
        _ => PolyaStatus::InvalidArgument,
    }
}

fn zero_status(e: &ZeroError) -> PolyaStatus {
    match e {
        ZeroError::Special(s) => special_status(s),
        ZeroError::InvalidInput(_) => PolyaStatus::InvalidArgument,
        ZeroError::AmbiguousTie { .. } => PolyaStatus::AmbiguousTie,
        ZeroError::Cache { .. } => PolyaStatus::Io,
        _ => PolyaStatus::NumericalFailure,
    }
}

fn spectra_status(e: &SpectraError) -> PolyaStatus {
    match e {
        SpectraError::InvalidDomain(_) | SpectraError::InvalidLambda(_) => {
            PolyaStatus::InvalidArgument
        }
        SpectraError::Unsupported(_) => PolyaStatus::Unsupported,
        SpectraError::Zero(z) => zero_status(z),
        SpectraError::Special(s) => special_status(s),
        SpectraError::Phase(PhaseError::Domain(_)) => PolyaStatus::InvalidArgument,
        SpectraError::Phase(_) => PolyaStatus::NumericalFailure,
    }
}

fn spectra_err(e: SpectraError) -> (PolyaStatus, String) {
    (spectra_status(&e), e.to_string())
}

fn null(what: &str) -> (PolyaStatus, String) {
    (PolyaStatus::NullPointer, format!("{what} is null"))
}

fn domain(d: *const PolyaDomain) -> Outcome<DomainSpec> {
    // SAFETY: the caller passes a valid pointer or null
    let d = unsafe { d.as_ref() }.ok_or_else(|| null("domain"))?;
    let bc = match d.bc {
        POLYA_BC_DIRICHLET => Bc::Dirichlet,
        POLYA_BC_NEUMANN => Bc::Neumann,
        other => {
            return Err((
                PolyaStatus::InvalidArgument,
                format!("unknown boundary condition {other}"),
            ))
        }
    };
    let shape = match d.shape {
        POLYA_SHAPE_SECTOR => Shape::Sector(d.alpha),
        POLYA_SHAPE_BALL => Shape::Ball(d.dim),
        other => {
            return Err((
                PolyaStatus::InvalidArgument,
                format!("unknown shape {other}"),
            ))
        }
    };
    DomainSpec::new(shape, bc).map_err(spectra_err)
}

fn cache<'a>(c: *const PolyaZeroCache) -> Outcome<&'a ZeroCache> {
    // SAFETY: the handle came from polya_cache_new and has not been freed
    unsafe { c.as_ref() }
        .map(|c| &c.inner)
        .ok_or_else(|| null("cache"))
}

fn write<T>(out: *mut T, v: T, what: &str) -> Outcome<()> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and, per the contract, writable
    unsafe { out.write(v) };
    Ok(())
}

/// New in-memory cache. Release it with `polya_cache_free`.
#[no_mangle]
pub extern "C" fn polya_cache_new() -> *mut PolyaZeroCache {
    Box::into_raw(Box::new(PolyaZeroCache {
        inner: ZeroCache::default(),
    }))
}

/// New cache that also persists tables under the directory `dir`.
///
/// # Safety
/// `dir` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn polya_cache_new_with_dir(
    dir: *const c_char,
    out: *mut *mut PolyaZeroCache,
) -> PolyaStatus {
    guarded(|| {
        if dir.is_null() {
            return Err(null("dir"));
        }
        let path = CStr::from_ptr(dir)
            .to_str()
            .map_err(|_| (PolyaStatus::InvalidArgument, "dir is not UTF-8".to_string()))?;
        let inner = ZeroCache::with_dir(EvalPolicy::default(), path)
            .map_err(|e| (zero_status(&e), e.to_string()))?;
        write(
            out,
            Box::into_raw(Box::new(PolyaZeroCache { inner })),
            "out",
        )
    })
}

/// Release a cache. Null is ignored.
///
/// # Safety
/// `cache` must come from a constructor here and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn polya_cache_free(cache: *mut PolyaZeroCache) {
    if !cache.is_null() {
        drop(Box::from_raw(cache));
    }
}

/// `J_ν(x)` for `ν, x ≥ 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn polya_bessel_j(nu: f64, x: f64, out: *mut f64) -> PolyaStatus {
    guarded(|| {
        let v = special::bessel_j(nu, x, &EvalPolicy::default())
            .map_err(|e| (special_status(&e), e.to_string()))?;
        write(out, v, "out")
    })
}

/// Number of zeros of `J_ν` (`neumann == 0`) or `J'_ν` (otherwise) in `[0, x]`.
///
/// # Safety
/// `cache` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn polya_count_zeros(
    cache: *const PolyaZeroCache,
    nu: f64,
    neumann: u32,
    x: f64,
    out: *mut u64,
) -> PolyaStatus {
    guarded(|| {
        let kind = if neumann == 0 {
            ZeroKind::Dirichlet
        } else {
            ZeroKind::Neumann
        };
        let c = self::cache(cache)?
            .count_zeros_leq(nu, kind, x)
            .map_err(|e| (zero_status(&e), e.to_string()))?;
        write(out, c.count as u64, "out")
    })
}

/// Weyl term `C_d |Ω| Λ^{d/2}` of a domain.
///
/// # Safety
/// `domain` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn polya_weyl_term(
    domain: *const PolyaDomain,
    lambda: f64,
    out: *mut f64,
) -> PolyaStatus {
    guarded(|| {
        let spec = self::domain(domain)?;
        write(
            out,
            spectra::weyl_term(&spec, lambda).map_err(spectra_err)?,
            "out",
        )
    })
}

/// Eigenvalue count `N(Λ)` (eigenvalues `≤ Λ`, with multiplicity) and the
/// Pólya margin: `weyl − N` for Dirichlet, `N − weyl` for Neumann.
/// `margin` may be null.
///
/// # Safety
/// Pointers must be valid as described.
#[no_mangle]
pub unsafe extern "C" fn polya_count(
    cache: *const PolyaZeroCache,
    domain: *const PolyaDomain,
    lambda: f64,
    count: *mut u64,
    margin: *mut f64,
) -> PolyaStatus {
    guarded(|| {
        let c = self::cache(cache)?;
        let spec = self::domain(domain)?;
        let r = spectra::count(&spec, c, lambda).map_err(spectra_err)?;
        write(count, r.exact_count, "count")?;
        if !margin.is_null() {
            write(margin, r.margin, "margin")?;
        }
        Ok(())
    })
}

/// Pólya verdict at a single `Λ`.
///
/// # Safety
/// Pointers must be valid as described.
#[no_mangle]
pub unsafe extern "C" fn polya_verdict(
    cache: *const PolyaZeroCache,
    domain: *const PolyaDomain,
    lambda: f64,
    out: *mut PolyaVerdict,
) -> PolyaStatus {
    guarded(|| {
        let c = self::cache(cache)?;
        let spec = self::domain(domain)?;
        let v = spectra::polya_verdict(&spec, c, lambda).map_err(spectra_err)?;
        let v = match v.verdict {
            Verdict::Pass => PolyaVerdict::Pass,
            Verdict::Fail => PolyaVerdict::Fail,
            Verdict::TieAmbiguous => PolyaVerdict::TieAmbiguous,
        };
        write(out, v, "out")
    })
}

/// Copy the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL, so
/// a call with `len == 0` sizes the buffer.
///
/// # Safety
/// `buf` must be writable for `len` bytes or null when `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn polya_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            ptr::copy_nonoverlapping(e.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn polya_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
