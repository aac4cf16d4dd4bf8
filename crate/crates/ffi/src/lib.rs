//! C ABI over `ising-core`.
//!
//! Every function returns an `ISING_*` status code and writes results through out-pointers.
//! Series are opaque `IsingSeries` handles released with `ising_series_free`; strings
//! returned to the caller are released with `ising_string_free`. After a non-zero status,
//! `ising_last_error_message` describes the failure on the calling thread.

use ising_core::ht_expansion::{run_window, WindowOptions};
use ising_core::oracle::{exhaustive_partition, LatticeKind, LatticeSpec};
use ising_core::pt_solver::{critical_point, free_energy, QuadOptions, ThetaForm};
use ising_core::sc_series::{run_sc_series, ScSeriesOptions};
use ising_core::walker::{whitney_check, Geometry, LoopWalk};
use ising_core::Error;
use num_traits::ToPrimitive;
use std::cell::RefCell;
use std::ffi::{c_char, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

pub const ISING_OK: c_int = 0;
pub const ISING_ERR_NULL: c_int = 1;
pub const ISING_ERR_INVALID_ARG: c_int = 2;
pub const ISING_ERR_BUDGET: c_int = 3;
pub const ISING_ERR_INTERNAL: c_int = 4;
pub const ISING_ERR_PANIC: c_int = 5;

pub const ISING_LATTICE_CHAIN: c_int = 0;
pub const ISING_LATTICE_SQ: c_int = 1;
pub const ISING_LATTICE_PT: c_int = 2;
pub const ISING_LATTICE_SC: c_int = 3;

/// Exact series coefficients with their decimal approximations.
pub struct IsingSeries {
    exact: Vec<String>,
    approx: Vec<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

type Failure = (c_int, String);

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn from_core(e: Error) -> Failure {
    let code = match e {
        Error::Budget { .. } => ISING_ERR_BUDGET,
        Error::Invalid(_) | Error::TooLarge(_) | Error::OddVertex(_) => ISING_ERR_INVALID_ARG,
        _ => ISING_ERR_INTERNAL,
    };
    (code, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> c_int {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ISING_OK
        }
        Ok(Err((code, msg))) => {
            set_error(&msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            ISING_ERR_PANIC
        }
    }
}

fn null() -> Failure {
    (ISING_ERR_NULL, "null pointer argument".into())
}

fn invalid(msg: impl Into<String>) -> Failure {
    (ISING_ERR_INVALID_ARG, msg.into())
}

fn lattice_kind(k: c_int) -> Result<LatticeKind, Failure> {
    match k {
        ISING_LATTICE_CHAIN => Ok(LatticeKind::Chain),
        ISING_LATTICE_SQ => Ok(LatticeKind::Sq),
        ISING_LATTICE_PT => Ok(LatticeKind::Pt),
        ISING_LATTICE_SC => Ok(LatticeKind::Sc),
        _ => Err(invalid(format!("unknown lattice kind {k}"))),
    }
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn put_series(out: *mut *mut IsingSeries, s: IsingSeries) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(s)))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ising_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success. Owned by the library.
#[no_mangle]
pub extern "C" fn ising_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Triangular-lattice critical point x_c and T_c/J.
///
/// # Safety
/// Non-null pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_critical_point(x_c: *mut f64, t_c_over_j: *mut f64) -> c_int {
    guard(|| {
        if x_c.is_null() || t_c_over_j.is_null() {
            return Err(null());
        }
        let c = critical_point();
        put(x_c, c.x_c)?;
        put(t_c_over_j, c.t_c)
    })
}

/// Free energy per site of the triangular lattice; `printed_theta` selects the printed integrand.
///
/// # Safety
/// `phi` must be valid for writes; `quad_error` may be null.
#[no_mangle]
pub unsafe extern "C" fn ising_free_energy(
    t: f64,
    j: f64,
    printed_theta: c_int,
    phi: *mut f64,
    quad_error: *mut f64,
) -> c_int {
    guard(|| {
        if phi.is_null() {
            return Err(null());
        }
        let opts = QuadOptions {
            form: if printed_theta != 0 { ThetaForm::Printed } else { ThetaForm::Planar },
            ..QuadOptions::default()
        };
        let r = free_energy(t, j, &opts).map_err(from_core)?;
        put(phi, r.phi)?;
        if !quad_error.is_null() {
            put(quad_error, r.quad_error)?;
        }
        Ok(())
    })
}

/// Filtered cubic series per site: `log_pipeline` = 0 for Ψ^{1/2}, non-zero for ½ log Ψ.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_series_sc_filtered(
    order: usize,
    log_pipeline: c_int,
    out: *mut *mut IsingSeries,
) -> c_int {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let rep = run_sc_series(&ScSeriesOptions {
            order,
            ..ScSeriesOptions::default()
        })
        .map_err(from_core)?;
        let p = if log_pipeline != 0 { &rep.log } else { &rep.sqrt };
        put_series(
            out,
            IsingSeries {
                exact: p.rows.iter().map(|r| r.value.clone()).collect(),
                approx: p
                    .rows
                    .iter()
                    .map(|r| r.rational.as_ref().and_then(|q| q.to_f64()).unwrap_or(f64::NAN))
                    .collect(),
            },
        )
    })
}

fn integer_series(c: &[num_bigint::BigInt]) -> IsingSeries {
    IsingSeries {
        exact: c.iter().map(|v| v.to_string()).collect(),
        approx: c.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect(),
    }
}

/// Exhaustive partition polynomial 2^{-N} Σ_σ Π(1 + xσσ′) on a finite lattice.
///
/// # Safety
/// `sides` must point to `n_sides` readable values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_series_oracle_partition(
    lattice: c_int,
    sides: *const usize,
    n_sides: usize,
    periodic: c_int,
    out: *mut *mut IsingSeries,
) -> c_int {
    guard(|| {
        if sides.is_null() || out.is_null() {
            return Err(null());
        }
        let sides = std::slice::from_raw_parts(sides, n_sides).to_vec();
        let spec = LatticeSpec::new(lattice_kind(lattice)?, sides, periodic != 0).map_err(from_core)?;
        let lat = spec.build().map_err(from_core)?;
        let poly = exhaustive_partition(&lat).map_err(from_core)?;
        put_series(out, integer_series(&poly))
    })
}

/// Window product expansion on SQ or SC with the default radius.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_series_ht_window(
    lattice: c_int,
    order: usize,
    through_center: c_int,
    bond_dedup: c_int,
    out: *mut *mut IsingSeries,
) -> c_int {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let mut opts = WindowOptions::new(lattice_kind(lattice)?, order);
        opts.through_center = through_center != 0;
        opts.bond_dedup = bond_dedup != 0;
        let run = run_window(&opts).map_err(from_core)?;
        if run.order_reached < order {
            return Err((
                ISING_ERR_BUDGET,
                format!("state budget reached; complete through order {}", run.order_reached),
            ));
        }
        put_series(out, integer_series(&run.coeffs))
    })
}

/// Highest x-power stored, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ising_series_order(s: *const IsingSeries) -> usize {
    s.as_ref().map_or(0, |s| s.exact.len().saturating_sub(1))
}

/// Coefficient of x^r as a double (NaN if not representable).
///
/// # Safety
/// `s` must be null or a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_series_coeff_f64(s: *const IsingSeries, r: usize, out: *mut f64) -> c_int {
    guard(|| {
        let s = s.as_ref().ok_or_else(null)?;
        let v = *s.approx.get(r).ok_or_else(|| invalid(format!("r = {r} beyond the series")))?;
        put(out, v)
    })
}

/// Exact coefficient of x^r; release the string with `ising_string_free`.
///
/// # Safety
/// `s` must be null or a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_series_coeff_string(s: *const IsingSeries, r: usize, out: *mut *mut c_char) -> c_int {
    guard(|| {
        let s = s.as_ref().ok_or_else(null)?;
        let v = s.exact.get(r).ok_or_else(|| invalid(format!("r = {r} beyond the series")))?;
        let c = CString::new(v.as_str()).map_err(|e| (ISING_ERR_INTERNAL, e.to_string()))?;
        put(out, c.into_raw())
    })
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ising_series_free(s: *mut IsingSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ising_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Whitney parity of a closed triangular walk given as directions 1..=6 from the origin.
/// `printed_layout` selects the printed neighbour table instead of the planar one.
///
/// # Safety
/// `dirs` must point to `len` readable bytes; `passes` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_whitney_check(
    dirs: *const u8,
    len: usize,
    printed_layout: c_int,
    passes: *mut c_int,
) -> c_int {
    guard(|| {
        if dirs.is_null() || passes.is_null() {
            return Err(null());
        }
        let d = std::slice::from_raw_parts(dirs, len).to_vec();
        let g = if printed_layout != 0 { Geometry::PtPrinted } else { Geometry::PtPlanar };
        let w = LoopWalk::from_dirs(g, [0; 3], d).map_err(from_core)?;
        if !w.is_lattice_closed() {
            return Err(invalid("walk does not close"));
        }
        put(passes, whitney_check(&w).passes as c_int)
    })
}

/// Copy of the last error message, for callers that prefer owned strings.
pub fn last_error() -> String {
    LAST_ERROR.with(|e| e.borrow().to_string_lossy().into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn version_is_nul_terminated() {
        let v = unsafe { CStr::from_ptr(ising_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn panics_become_status_codes() {
        assert_eq!(guard(|| panic!("boom")), ISING_ERR_PANIC);
        assert!(last_error().contains("boom"));
    }
}
