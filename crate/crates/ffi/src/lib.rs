//! C ABI for the flamefront solver.
//!
//! Waves and branches are returned as opaque heap handles that the caller
//! releases with [`ff_wave_free`] and [`ff_branch_free`]. Every fallible call
//! returns an [`FfStatus`]; the message of the last failure on the calling
//! thread is available through [`ff_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use flamefront::bifurcation::{asymptotic_guess, bifurcation_alpha};
use flamefront::evolution::{stability_probe, StabilityProbeConfig};
use flamefront::solver::{
    continue_branch, quasi_newton_solve, BranchRecord, SolveConfig, Termination, WaveSolution,
};
use flamefront::{FlameError, ModelKind};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegenerateFront = 3,
    NoConvergence = 4,
    SingularSystem = 5,
    BranchStart = 6,
    UnsupportedModel = 7,
    BlowUp = 8,
    BufferTooSmall = 9,
    Internal = 10,
}

/// Velocity closure selector, passed as a plain integer.
pub const FF_MODEL_LINEAR: u32 = 0;
pub const FF_MODEL_NONLINEAR: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FfTermination {
    SelfIntersection = 0,
    AlphaThreshold = 1,
    IterationFailure = 2,
    MaxAmplitudeReached = 3,
}

/// Scalar data of a wave.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FfWaveInfo {
    pub alpha: f64,
    pub beta: f64,
    pub length: f64,
    pub amplitude: f64,
    pub residual_norm: f64,
    pub nx: usize,
    pub k0: u32,
    pub iterations: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FfGrowth {
    pub rate: f64,
    pub intercept: f64,
    pub window_start: f64,
    pub window_end: f64,
    pub unstable_observed: bool,
}

/// Opaque traveling wave.
pub struct FfWave(WaveSolution);

/// Opaque wave branch.
pub struct FfBranch(BranchRecord);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &FlameError) -> FfStatus {
    match e {
        FlameError::InvalidGrid { .. } | FlameError::Domain(_) | FlameError::Contract(_) => {
            FfStatus::InvalidArgument
        }
        FlameError::DegenerateFront { .. } => FfStatus::DegenerateFront,
        FlameError::NoConvergence { .. } | FlameError::RootNotFound(_) => FfStatus::NoConvergence,
        FlameError::SingularSystem { .. } => FfStatus::SingularSystem,
        FlameError::BranchStart(_) => FfStatus::BranchStart,
        FlameError::UnsupportedModel(_) => FfStatus::UnsupportedModel,
        FlameError::BlowUp { .. } => FfStatus::BlowUp,
        FlameError::Consistency(_) => FfStatus::Internal,
    }
}

fn fail(status: FfStatus, msg: impl Into<String>) -> FfStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), FfStatus>) -> FfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FfStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(FfStatus::Internal, "panic inside flamefront"),
    }
}

fn lift<T>(r: flamefront::Result<T>) -> Result<T, FfStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn model(code: u32) -> Result<ModelKind, FfStatus> {
    match code {
        FF_MODEL_LINEAR => Ok(ModelKind::Linear),
        FF_MODEL_NONLINEAR => Ok(ModelKind::Nonlinear),
        other => Err(fail(
            FfStatus::InvalidArgument,
            format!("unknown model code {other}"),
        )),
    }
}

fn out_ptr<T>(p: *mut T) -> Result<&'static mut T, FfStatus> {
    // SAFETY: the caller guarantees that a non-null pointer is valid for writes
    unsafe { p.as_mut() }.ok_or_else(|| fail(FfStatus::NullPointer, "null output pointer"))
}

fn handle<'a, T>(p: *const T) -> Result<&'a T, FfStatus> {
    // SAFETY: non-null handles were produced by this library and not yet freed
    unsafe { p.as_ref() }.ok_or_else(|| fail(FfStatus::NullPointer, "null handle"))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length including the NUL,
/// or 0 when there is no message.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ff_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ff_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Bifurcation point `α₀` of mode `k0` for the given closure.
///
/// # Safety
/// `alpha0` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ff_bifurcation_alpha(
    model_code: u32,
    k0: u32,
    alpha0: *mut f64,
) -> FfStatus {
    guard(|| {
        let out = out_ptr(alpha0)?;
        *out = lift(bifurcation_alpha(model(model_code)?, k0))?;
        Ok(())
    })
}

/// Solves the small wave of amplitude `h` (at most 0.3) on the branch of
/// mode `k0`, on `nx` grid points.
///
/// # Safety
/// `wave` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ff_wave_solve(
    model_code: u32,
    k0: u32,
    h: f64,
    nx: usize,
    wave: *mut *mut FfWave,
) -> FfStatus {
    guard(|| {
        let out = out_ptr(wave)?;
        *out = ptr::null_mut();
        let kind = model(model_code)?;
        let (g, p) = lift(asymptotic_guess(k0, h, kind, nx))?;
        let cfg = SolveConfig {
            nx,
            ..Default::default()
        };
        let w = lift(quasi_newton_solve((&g, &p), h, kind, &cfg))?;
        *out = Box::into_raw(Box::new(FfWave(w)));
        Ok(())
    })
}

/// # Safety
/// `wave` must be null or a handle from this library that is not used again.
#[no_mangle]
pub unsafe extern "C" fn ff_wave_free(wave: *mut FfWave) {
    if !wave.is_null() {
        drop(Box::from_raw(wave));
    }
}

/// # Safety
/// `wave` must be a live handle; `info` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ff_wave_info(wave: *const FfWave, info: *mut FfWaveInfo) -> FfStatus {
    guard(|| {
        let w = &handle(wave)?.0;
        *out_ptr(info)? = FfWaveInfo {
            alpha: w.alpha,
            beta: w.beta,
            length: w.length,
            amplitude: w.amplitude,
            residual_norm: w.residual_norm,
            nx: w.theta.nx(),
            k0: w.k0,
            iterations: w.iterations,
        };
        Ok(())
    })
}

/// Copies the `nx` grid values of `θ` into `buf`.
///
/// # Safety
/// `wave` must be a live handle; `buf` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ff_wave_theta(wave: *const FfWave, buf: *mut f64, len: usize) -> FfStatus {
    guard(|| {
        let w = &handle(wave)?.0;
        if buf.is_null() {
            return Err(fail(FfStatus::NullPointer, "null buffer"));
        }
        let v = w.theta.values();
        if len < v.len() {
            return Err(fail(
                FfStatus::BufferTooSmall,
                format!("buffer holds {len} values, wave has {}", v.len()),
            ));
        }
        ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
        Ok(())
    })
}

/// Continues the branch of mode `k0` in amplitude steps `h_step` up to
/// `h_max`.
///
/// # Safety
/// `branch` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ff_branch_continue(
    model_code: u32,
    k0: u32,
    h_step: f64,
    h_max: f64,
    nx: usize,
    branch: *mut *mut FfBranch,
) -> FfStatus {
    guard(|| {
        let out = out_ptr(branch)?;
        *out = ptr::null_mut();
        let kind = model(model_code)?;
        let cfg = SolveConfig {
            nx,
            ..Default::default()
        };
        let rec = lift(continue_branch(k0, kind, h_step, h_max, &cfg))?;
        *out = Box::into_raw(Box::new(FfBranch(rec)));
        Ok(())
    })
}

/// # Safety
/// `branch` must be null or a handle from this library that is not used again.
#[no_mangle]
pub unsafe extern "C" fn ff_branch_free(branch: *mut FfBranch) {
    if !branch.is_null() {
        drop(Box::from_raw(branch));
    }
}

/// Number of waves on the branch; 0 for a null handle.
///
/// # Safety
/// `branch` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ff_branch_len(branch: *const FfBranch) -> usize {
    branch.as_ref().map_or(0, |b| b.0.solutions.len())
}

/// # Safety
/// `branch` must be a live handle; `reason` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ff_branch_termination(
    branch: *const FfBranch,
    reason: *mut FfTermination,
) -> FfStatus {
    guard(|| {
        let b = &handle(branch)?.0;
        *out_ptr(reason)? = match b.termination {
            Termination::SelfIntersection => FfTermination::SelfIntersection,
            Termination::AlphaThreshold => FfTermination::AlphaThreshold,
            Termination::IterationFailure => FfTermination::IterationFailure,
            Termination::MaxAmplitudeReached => FfTermination::MaxAmplitudeReached,
        };
        Ok(())
    })
}

/// Copies wave `index` of the branch into a new handle.
///
/// # Safety
/// `branch` must be a live handle; `wave` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ff_branch_wave(
    branch: *const FfBranch,
    index: usize,
    wave: *mut *mut FfWave,
) -> FfStatus {
    guard(|| {
        let b = &handle(branch)?.0;
        let out = out_ptr(wave)?;
        *out = ptr::null_mut();
        let w = b.solutions.get(index).ok_or_else(|| {
            fail(
                FfStatus::InvalidArgument,
                format!("index {index} out of range for {} waves", b.solutions.len()),
            )
        })?;
        *out = Box::into_raw(Box::new(FfWave(w.clone())));
        Ok(())
    })
}

/// Growth rate of the wave under the perturbation `δ(sin σ + sin 2σ)`.
///
/// # Safety
/// `wave` must be a live handle; `growth` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ff_stability_probe(
    wave: *const FfWave,
    delta: f64,
    dt: f64,
    t_max: f64,
    growth: *mut FfGrowth,
) -> FfStatus {
    guard(|| {
        let w = &handle(wave)?.0;
        let out = out_ptr(growth)?;
        let cfg = StabilityProbeConfig {
            delta,
            dt,
            t_max,
            ..Default::default()
        };
        let g = lift(stability_probe(w, &cfg))?;
        *out = FfGrowth {
            rate: g.rate,
            intercept: g.intercept,
            window_start: g.window.0,
            window_end: g.window.1,
            unstable_observed: g.unstable_observed,
        };
        Ok(())
    })
}
