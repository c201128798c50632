//! C ABI for the rhostar library: opaque space handles, status codes, and
//! flat-buffer entry points for norm evaluation, the rho derivatives,
//! orthogonality verdicts and the Thalesian decomposition.
//!
//! Every function returns a `RhostarStatus`; results are written through out
//! pointers. Handles created by the `rhostar_space_*` constructors must be
//! released with `rhostar_space_free`.

use std::os::raw::c_char;

use rhostar::constructions::thalesian_decompose;
use rhostar::derivatives::{rho, rho_minus, rho_plus, rho_star};
use rhostar::orthogonality::{is_orthogonal, Flavor};
use rhostar::{Error, NormedSpace, Seed, Tolerance, Vector};

/// Opaque handle to a normed space.
pub struct RhostarSpace {
    inner: NormedSpace,
}

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhostarStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonFinite = 4,
    InvalidNorm = 5,
    NotSmooth = 6,
    ZeroVector = 7,
    NoWitness = 8,
    NumericFailure = 9,
}

/// Orthogonality relation selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhostarFlavor {
    Birkhoff = 0,
    Isosceles = 1,
    RhoMinus = 2,
    RhoPlus = 3,
    Rho = 4,
    RhoStar = 5,
    Sip = 6,
}

impl From<RhostarFlavor> for Flavor {
    fn from(f: RhostarFlavor) -> Flavor {
        match f {
            RhostarFlavor::Birkhoff => Flavor::Birkhoff,
            RhostarFlavor::Isosceles => Flavor::Isosceles,
            RhostarFlavor::RhoMinus => Flavor::RhoMinus,
            RhostarFlavor::RhoPlus => Flavor::RhoPlus,
            RhostarFlavor::Rho => Flavor::Rho,
            RhostarFlavor::RhoStar => Flavor::RhoStar,
            RhostarFlavor::Sip => Flavor::Sip,
        }
    }
}

fn status_of(err: &Error) -> RhostarStatus {
    match err {
        Error::NonFinite { .. } => RhostarStatus::NonFinite,
        Error::DimensionMismatch { .. } => RhostarStatus::DimensionMismatch,
        Error::EmptyVector => RhostarStatus::InvalidArgument,
        Error::InvalidNorm(_) => RhostarStatus::InvalidNorm,
        Error::InvalidTolerance(_) | Error::InvalidArgument(_) | Error::Parse(_) => {
            RhostarStatus::InvalidArgument
        }
        Error::ZeroVector { .. } => RhostarStatus::ZeroVector,
        Error::LinearlyDependent => RhostarStatus::InvalidArgument,
        Error::SemiInnerProductNotUnique => RhostarStatus::NotSmooth,
        Error::NoWitnessFound => RhostarStatus::NoWitness,
        Error::BracketSignContract(_) | Error::BisectIterLimit { .. } => {
            RhostarStatus::NumericFailure
        }
        Error::Io(_) | Error::Serialize(_) => RhostarStatus::InvalidArgument,
    }
}

/// Human-readable name of a status code (static storage, do not free).
#[no_mangle]
pub extern "C" fn rhostar_status_name(status: RhostarStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        RhostarStatus::Ok => b"ok\0",
        RhostarStatus::NullPointer => b"null pointer\0",
        RhostarStatus::InvalidArgument => b"invalid argument\0",
        RhostarStatus::DimensionMismatch => b"dimension mismatch\0",
        RhostarStatus::NonFinite => b"non-finite value\0",
        RhostarStatus::InvalidNorm => b"invalid norm\0",
        RhostarStatus::NotSmooth => b"semi-inner product not unique\0",
        RhostarStatus::ZeroVector => b"zero vector not allowed\0",
        RhostarStatus::NoWitness => b"no witness found\0",
        RhostarStatus::NumericFailure => b"numeric failure\0",
    };
    name.as_ptr() as *const c_char
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if ptr.is_null() {
        return None;
    }
    Some(std::slice::from_raw_parts(ptr, len))
}

unsafe fn vector_arg(ptr: *const f64, len: usize) -> Result<Vector, RhostarStatus> {
    let slice = slice_arg(ptr, len).ok_or(RhostarStatus::NullPointer)?;
    Vector::new(slice.to_vec()).map_err(|e| status_of(&e))
}

fn emit_space(space: Result<NormedSpace, Error>, out: *mut *mut RhostarSpace) -> RhostarStatus {
    if out.is_null() {
        return RhostarStatus::NullPointer;
    }
    match space {
        Ok(inner) => {
            let boxed = Box::new(RhostarSpace { inner });
            unsafe { *out = Box::into_raw(boxed) };
            RhostarStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Creates an l1 space of the given dimension.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rhostar_space_l1(dim: usize, out: *mut *mut RhostarSpace) -> RhostarStatus {
    emit_space(NormedSpace::new(dim, rhostar::NormSpec::L1), out)
}

/// Creates an l-infinity space of the given dimension.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rhostar_space_linf(
    dim: usize,
    out: *mut *mut RhostarSpace,
) -> RhostarStatus {
    emit_space(NormedSpace::new(dim, rhostar::NormSpec::Linf), out)
}

/// Creates an lp space (1 < p < infinity).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rhostar_space_lp(
    dim: usize,
    p: f64,
    out: *mut *mut RhostarSpace,
) -> RhostarStatus {
    emit_space(NormedSpace::lp(dim, p), out)
}

/// Creates a weighted lp space; `weights` must hold `dim` positive entries.
///
/// # Safety
/// `weights` must point to `dim` doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rhostar_space_weighted_lp(
    dim: usize,
    p: f64,
    weights: *const f64,
    out: *mut *mut RhostarSpace,
) -> RhostarStatus {
    let Some(w) = slice_arg(weights, dim) else {
        return RhostarStatus::NullPointer;
    };
    emit_space(NormedSpace::weighted_lp(dim, p, w.to_vec()), out)
}

/// Creates a polyhedral space from `n_rows` functionals of length `dim`,
/// stored row-major in `rows`. The functionals must have full column rank.
///
/// # Safety
/// `rows` must point to `n_rows * dim` doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rhostar_space_polyhedral(
    dim: usize,
    rows: *const f64,
    n_rows: usize,
    out: *mut *mut RhostarSpace,
) -> RhostarStatus {
    let Some(flat) = slice_arg(rows, n_rows.saturating_mul(dim)) else {
        return RhostarStatus::NullPointer;
    };
    let rows_vec: Vec<Vec<f64>> = flat.chunks(dim.max(1)).map(|c| c.to_vec()).collect();
    emit_space(NormedSpace::polyhedral(dim, rows_vec), out)
}

/// Releases a space handle. Passing NULL is a no-op.
///
/// # Safety
/// `space` must have been produced by a `rhostar_space_*` constructor and
/// not freed before.
#[no_mangle]
pub unsafe extern "C" fn rhostar_space_free(space: *mut RhostarSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Dimension of the space, or 0 for NULL.
///
/// # Safety
/// `space` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn rhostar_space_dim(space: *const RhostarSpace) -> usize {
    space.as_ref().map_or(0, |s| s.inner.dim())
}

macro_rules! space_ref {
    ($space:expr) => {
        match $space.as_ref() {
            Some(s) => &s.inner,
            None => return RhostarStatus::NullPointer,
        }
    };
}

/// ||x|| for a coordinate buffer of length `len`.
///
/// # Safety
/// `x` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rhostar_norm(
    space: *const RhostarSpace,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> RhostarStatus {
    let sp = space_ref!(space);
    if out.is_null() {
        return RhostarStatus::NullPointer;
    }
    let xv = match vector_arg(x, len) {
        Ok(v) => v,
        Err(s) => return s,
    };
    match sp.norm(&xv) {
        Ok(v) => {
            *out = v;
            RhostarStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

unsafe fn derivative_entry(
    space: *const RhostarSpace,
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
    f: impl Fn(&NormedSpace, &Vector, &Vector) -> Result<f64, Error>,
) -> RhostarStatus {
    let sp = space_ref!(space);
    if out.is_null() {
        return RhostarStatus::NullPointer;
    }
    let xv = match vector_arg(x, len) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let yv = match vector_arg(y, len) {
        Ok(v) => v,
        Err(s) => return s,
    };
    match f(sp, &xv, &yv) {
        Ok(v) => {
            *out = v;
            RhostarStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// rho_-(x, y).
///
/// # Safety
/// `x` and `y` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rhostar_rho_minus(
    space: *const RhostarSpace,
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> RhostarStatus {
    derivative_entry(space, x, y, len, out, |s, a, b| {
        Ok(rho_minus(s, a, b)?.value)
    })
}

/// rho_+(x, y).
///
/// # Safety
/// `x` and `y` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rhostar_rho_plus(
    space: *const RhostarSpace,
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> RhostarStatus {
    derivative_entry(space, x, y, len, out, |s, a, b| {
        Ok(rho_plus(s, a, b)?.value)
    })
}

/// rho(x, y) = (rho_- + rho_+) / 2.
///
/// # Safety
/// `x` and `y` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rhostar_rho(
    space: *const RhostarSpace,
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> RhostarStatus {
    derivative_entry(space, x, y, len, out, rho)
}

/// rho_star(x, y) = rho_-(x, y) rho_+(x, y).
///
/// # Safety
/// `x` and `y` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rhostar_rho_star(
    space: *const RhostarSpace,
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> RhostarStatus {
    derivative_entry(space, x, y, len, out, rho_star)
}

/// Decides x perp y for the requested flavor at the given tolerances.
/// Writes the verdict into `out_holds`; `out_residual` and `out_scale` may
/// be NULL when not needed.
///
/// # Safety
/// `x` and `y` must point to `len` doubles; `out_holds` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rhostar_is_orthogonal(
    space: *const RhostarSpace,
    x: *const f64,
    y: *const f64,
    len: usize,
    flavor: RhostarFlavor,
    abs_tol: f64,
    rel_tol: f64,
    out_holds: *mut bool,
    out_residual: *mut f64,
    out_scale: *mut f64,
) -> RhostarStatus {
    let sp = space_ref!(space);
    if out_holds.is_null() {
        return RhostarStatus::NullPointer;
    }
    let xv = match vector_arg(x, len) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let yv = match vector_arg(y, len) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let tol = match Tolerance::new(abs_tol, rel_tol, 0.0625, 0.5, 9.094947017729282e-13, 200) {
        Ok(t) => t,
        Err(e) => return status_of(&e),
    };
    match is_orthogonal(sp, &xv, &yv, flavor.into(), &tol) {
        Ok(v) => {
            *out_holds = v.holds;
            if !out_residual.is_null() {
                *out_residual = v.residual;
            }
            if !out_scale.is_null() {
                *out_scale = v.scale;
            }
            RhostarStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Thalesian decomposition: writes y with x perp_rho_star y and
/// x + y perp_rho_star lambda x - y into `out_y` (length `len`), plus both
/// residuals and the success flag. A false flag with status Ok means the
/// residual contract could not be met (the decomposition may not exist at
/// this point of a non-smooth space).
///
/// # Safety
/// `x` must point to `len` doubles; `out_y` must have room for `len`
/// doubles; the remaining out pointers may be NULL.
#[no_mangle]
pub unsafe extern "C" fn rhostar_thalesian_decompose(
    space: *const RhostarSpace,
    x: *const f64,
    len: usize,
    lambda: f64,
    seed: u64,
    out_y: *mut f64,
    out_residual_first: *mut f64,
    out_residual_second: *mut f64,
    out_holds: *mut bool,
) -> RhostarStatus {
    let sp = space_ref!(space);
    if out_y.is_null() {
        return RhostarStatus::NullPointer;
    }
    let xv = match vector_arg(x, len) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let tol = Tolerance::default();
    match thalesian_decompose(sp, &xv, lambda, Seed(seed), &tol) {
        Ok(d) => {
            let out = std::slice::from_raw_parts_mut(out_y, len);
            out.copy_from_slice(d.y.coords());
            if !out_residual_first.is_null() {
                *out_residual_first = d.residual_first;
            }
            if !out_residual_second.is_null() {
                *out_residual_second = d.residual_second;
            }
            if !out_holds.is_null() {
                *out_holds = d.holds;
            }
            RhostarStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
