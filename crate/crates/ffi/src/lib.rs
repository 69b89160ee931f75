// SPDX-License-Identifier: Apache-2.0

//! C ABI over `lep_qhe`.
//!
//! Conventions:
//! - every fallible call returns an [`LqStatus`]; on failure the message is
//!   available from [`lq_last_error`] on the same thread;
//! - results come back through out-pointers and opaque handles, each with its
//!   own `*_free`;
//! - all rates are rad/s or 1/s and all times are seconds (ħ = 1).
//!
//! Panics never cross the boundary; they surface as `LQ_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lep_qhe::config::{parse_config, Config};
use lep_qhe::cycle::{run_cycle, CycleRun};
use lep_qhe::sweep::{run_sweep, SweepRow};
use lep_qhe::{build_liouvillian, liouvillian_spectrum, steady_state, DriveParams, Phase};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Numerical = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LqPhase {
    Exact = 0,
    Broken = 1,
    AtLep = 2,
}

impl From<Phase> for LqPhase {
    fn from(p: Phase) -> Self {
        match p {
            Phase::Exact => LqPhase::Exact,
            Phase::Broken => LqPhase::Broken,
            Phase::AtLEP => LqPhase::AtLep,
        }
    }
}

/// Liouvillian spectrum, eigenvalues ordered by real part descending then
/// imaginary part ascending.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct LqSpectrum {
    pub re: [f64; 4],
    pub im: [f64; 4],
    pub xi_re: f64,
    pub xi_im: f64,
    pub phase: LqPhase,
}

/// Thermodynamic totals of one cycle. `eta` is NaN when no heat was absorbed.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct LqLedger {
    pub w_net: f64,
    pub q_in: f64,
    pub q_out: f64,
    pub delta_u: f64,
    pub eta: f64,
    pub encircled: bool,
    pub t_relax: f64,
    pub relax_converged: bool,
}

/// One trajectory sample. `segment` is 1..=4 for the strokes, 5 for relaxation.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct LqSample {
    pub t: f64,
    pub segment: u8,
    pub delta: f64,
    pub gamma: f64,
    pub p2: f64,
    pub w_cum: f64,
    pub q_in_cum: f64,
    pub q_out_cum: f64,
    pub u: f64,
}

/// One sweep point. `ok` is false when that point failed; the other fields
/// are then NaN except `delta_max`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct LqSweepRow {
    pub delta_max: f64,
    pub t1: f64,
    pub w_net: f64,
    pub q_in: f64,
    pub eta: f64,
    pub encircled: bool,
    pub ok: bool,
}

/// Opaque validated configuration.
pub struct LqConfig(Config);

/// Opaque cycle result.
pub struct LqCycle(CycleRun);

/// Opaque sweep result.
pub struct LqSweep(Vec<SweepRow>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn guard(f: impl FnOnce() -> Result<(), (LqStatus, String)>) -> LqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LqStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LqStatus::Panic
        }
    }
}

fn fail<T>(status: LqStatus, msg: impl ToString) -> Result<T, (LqStatus, String)> {
    Err((status, msg.to_string()))
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, (LqStatus, String)> {
    // SAFETY: caller passes a valid, aligned, writable pointer or null.
    unsafe { p.as_mut() }.ok_or((LqStatus::NullPointer, "null output pointer".into()))
}

unsafe fn in_ref<'a, T>(p: *const T) -> Result<&'a T, (LqStatus, String)> {
    // SAFETY: caller passes a live handle or null.
    unsafe { p.as_ref() }.ok_or((LqStatus::NullPointer, "null handle".into()))
}

unsafe fn in_str<'a>(p: *const c_char) -> Result<&'a str, (LqStatus, String)> {
    if p.is_null() {
        return fail(LqStatus::NullPointer, "null string");
    }
    // SAFETY: caller passes a NUL-terminated string.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .or_else(|_| fail(LqStatus::InvalidArgument, "string is not UTF-8"))
}

fn drive(delta: f64, omega: f64, phi: f64, gamma: f64) -> Result<DriveParams, (LqStatus, String)> {
    DriveParams::new(delta, omega, phi, gamma).or_else(|e| fail(LqStatus::InvalidArgument, e))
}

fn opt_nan(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn lq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lq_spectrum(
    delta: f64,
    omega: f64,
    phi: f64,
    gamma: f64,
    out: *mut LqSpectrum,
) -> LqStatus {
    guard(|| {
        let out = unsafe { out_ref(out)? };
        let p = drive(delta, omega, phi, gamma)?;
        let s = liouvillian_spectrum(&build_liouvillian(&p), &p)
            .or_else(|e| fail(LqStatus::Numerical, e))?;
        for (k, z) in s.eigenvalues.iter().enumerate() {
            out.re[k] = z.re;
            out.im[k] = z.im;
        }
        out.xi_re = s.xi.re;
        out.xi_im = s.xi.im;
        out.phase = s.phase.into();
        Ok(())
    })
}

/// Excited-state population of the unique steady state.
///
/// # Safety
/// `p2` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lq_steady_state_p2(
    delta: f64,
    omega: f64,
    phi: f64,
    gamma: f64,
    p2: *mut f64,
) -> LqStatus {
    guard(|| {
        let out = unsafe { out_ref(p2)? };
        let rho = steady_state(&drive(delta, omega, phi, gamma)?)
            .or_else(|e| fail(LqStatus::Numerical, e))?;
        *out = rho.p2();
        Ok(())
    })
}

fn new_config(cfg: Config, out: &mut *mut LqConfig) {
    *out = Box::into_raw(Box::new(LqConfig(cfg)));
}

/// Parses a JSON config document.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lq_config_from_json(
    json: *const c_char,
    out: *mut *mut LqConfig,
) -> LqStatus {
    guard(|| {
        let out = unsafe { out_ref(out)? };
        *out = ptr::null_mut();
        let cfg = parse_config(unsafe { in_str(json)? }).or_else(|e| fail(LqStatus::Config, e))?;
        new_config(cfg, out);
        Ok(())
    })
}

/// Loads a built-in preset: big-cycle, small-cycle, fig3a or fig3b.
///
/// # Safety
/// `name` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lq_config_from_preset(
    name: *const c_char,
    out: *mut *mut LqConfig,
) -> LqStatus {
    guard(|| {
        let out = unsafe { out_ref(out)? };
        *out = ptr::null_mut();
        let cfg =
            Config::preset(unsafe { in_str(name)? }).or_else(|e| fail(LqStatus::Config, e))?;
        new_config(cfg, out);
        Ok(())
    })
}

/// Overrides the worker count; the config is left unchanged on error.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lq_config_set_workers(cfg: *mut LqConfig, workers: usize) -> LqStatus {
    guard(|| {
        let cfg = unsafe { out_ref(cfg)? };
        let mut next = cfg.0.clone();
        next.workers = workers;
        next.validate().or_else(|e| fail(LqStatus::Config, e))?;
        cfg.0 = next;
        Ok(())
    })
}

/// Overrides the integrator step in ns; the config is left unchanged on error.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lq_config_set_dt_ns(cfg: *mut LqConfig, dt_ns: f64) -> LqStatus {
    guard(|| {
        let cfg = unsafe { out_ref(cfg)? };
        let mut next = cfg.0.clone();
        next.dt_ns = dt_ns;
        next.validate().or_else(|e| fail(LqStatus::Config, e))?;
        cfg.0 = next;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lq_config_free(cfg: *mut LqConfig) {
    if !cfg.is_null() {
        // SAFETY: handle came from Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(cfg) });
    }
}

/// Runs one full cycle with trajectory recording.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lq_cycle_run(cfg: *const LqConfig, out: *mut *mut LqCycle) -> LqStatus {
    guard(|| {
        let out = unsafe { out_ref(out)? };
        *out = ptr::null_mut();
        let cfg = unsafe { in_ref(cfg)? };
        let spec = cfg
            .0
            .to_cycle_spec()
            .or_else(|e| fail(LqStatus::Config, e))?;
        let run = run_cycle(&spec).or_else(|e| fail(LqStatus::Numerical, e))?;
        *out = Box::into_raw(Box::new(LqCycle(run)));
        Ok(())
    })
}

/// # Safety
/// `cycle` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lq_cycle_ledger(cycle: *const LqCycle, out: *mut LqLedger) -> LqStatus {
    guard(|| {
        let out = unsafe { out_ref(out)? };
        let run = &unsafe { in_ref(cycle)? }.0;
        let l = run.ledger;
        *out = LqLedger {
            w_net: l.w_net,
            q_in: l.q_in,
            q_out: l.q_out,
            delta_u: l.delta_u,
            eta: opt_nan(l.eta),
            encircled: run.encircled,
            t_relax: run.relax.t_relax,
            relax_converged: run.relax.converged,
        };
        Ok(())
    })
}

/// Number of trajectory samples, 0 for a null handle.
///
/// # Safety
/// `cycle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lq_cycle_len(cycle: *const LqCycle) -> usize {
    unsafe { cycle.as_ref() }.map_or(0, |c| c.0.trajectory.len())
}

/// # Safety
/// `cycle` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lq_cycle_sample(
    cycle: *const LqCycle,
    index: usize,
    out: *mut LqSample,
) -> LqStatus {
    guard(|| {
        let out = unsafe { out_ref(out)? };
        let run = &unsafe { in_ref(cycle)? }.0;
        let Some(p) = run.trajectory.get(index) else {
            return fail(
                LqStatus::OutOfRange,
                format!("sample {index} of {}", run.trajectory.len()),
            );
        };
        *out = LqSample {
            t: p.t,
            segment: p.segment,
            delta: p.delta,
            gamma: p.gamma,
            p2: p.p2,
            w_cum: p.w_cum,
            q_in_cum: p.q_in_cum,
            q_out_cum: p.q_out_cum,
            u: p.u,
        };
        Ok(())
    })
}

/// # Safety
/// `cycle` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lq_cycle_free(cycle: *mut LqCycle) {
    if !cycle.is_null() {
        // SAFETY: handle came from Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(cycle) });
    }
}

/// Runs the config's Δ_max sweep on its worker count. Per-point failures are
/// reported in the rows, not as a status.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lq_sweep_run(cfg: *const LqConfig, out: *mut *mut LqSweep) -> LqStatus {
    guard(|| {
        let out = unsafe { out_ref(out)? };
        *out = ptr::null_mut();
        let cfg = &unsafe { in_ref(cfg)? }.0;
        let Some(spec) = cfg.to_sweep_spec().or_else(|e| fail(LqStatus::Config, e))? else {
            return fail(LqStatus::Config, "config has no sweep section");
        };
        let rows = run_sweep(&spec, cfg.workers).or_else(|e| fail(LqStatus::Numerical, e))?;
        *out = Box::into_raw(Box::new(LqSweep(rows)));
        Ok(())
    })
}

/// # Safety
/// `sweep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lq_sweep_len(sweep: *const LqSweep) -> usize {
    unsafe { sweep.as_ref() }.map_or(0, |s| s.0.len())
}

/// # Safety
/// `sweep` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lq_sweep_row(
    sweep: *const LqSweep,
    index: usize,
    out: *mut LqSweepRow,
) -> LqStatus {
    guard(|| {
        let out = unsafe { out_ref(out)? };
        let rows = &unsafe { in_ref(sweep)? }.0;
        let Some(r) = rows.get(index) else {
            return fail(
                LqStatus::OutOfRange,
                format!("row {index} of {}", rows.len()),
            );
        };
        let ok = r.error.is_none();
        let or_nan = |x: f64| if ok { x } else { f64::NAN };
        *out = LqSweepRow {
            delta_max: r.delta_max,
            t1: r.t1,
            w_net: or_nan(r.w_net),
            q_in: or_nan(r.q_in),
            eta: opt_nan(r.eta),
            encircled: r.encircled,
            ok,
        };
        Ok(())
    })
}

/// # Safety
/// `sweep` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lq_sweep_free(sweep: *mut LqSweep) {
    if !sweep.is_null() {
        // SAFETY: handle came from Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(sweep) });
    }
}
