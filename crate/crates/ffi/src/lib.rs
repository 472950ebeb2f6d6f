//! C ABI over `csflab`.
//!
//! Curves and trajectories are opaque handles owned by the caller and
//! released with their `_free` function. Every fallible call returns a
//! [`CsfStatus`]; on failure the message is kept per thread and can be
//! copied out with [`csf_last_error_message`]. Panics never cross the
//! boundary and surface as [`CsfStatus::Panic`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use csflab::comparison::{a_solve, f_eval, profile};
use csflab::diagnostics::{
    abar_decay_report, convergence_metrics, curvature_bound_report, distance_comparison_report, TrajectoryProfiles,
};
use csflab::dynamics::{run, DtPolicy, FlowConfig, RunKind, Scheme, Termination, Trajectory};
use csflab::geometry::{build_frame, canonical_scale, is_embedded};
use csflab::harness::{cmd_verify_identities, generate, IdentityOptions};
use csflab::{DiscreteCurve, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegenerateCurve = 3,
    NotEmbedded = 4,
    InvalidPair = 5,
    ResampleFailure = 6,
    SelfIntersection = 7,
    NumericalBlowup = 8,
    DomainError = 9,
    WrongRunKind = 10,
    ConfigError = 11,
    GenerationFailure = 12,
    ParseError = 13,
    IoError = 14,
    BufferTooSmall = 15,
    Panic = 99,
}

impl From<&Error> for CsfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DegenerateCurve(_) => CsfStatus::DegenerateCurve,
            Error::NotEmbedded => CsfStatus::NotEmbedded,
            Error::InvalidPair(..) => CsfStatus::InvalidPair,
            Error::ResampleFailure(_) => CsfStatus::ResampleFailure,
            Error::SelfIntersection { .. } => CsfStatus::SelfIntersection,
            Error::NumericalBlowup { .. } => CsfStatus::NumericalBlowup,
            Error::DomainError(_) => CsfStatus::DomainError,
            Error::WrongRunKind { .. } => CsfStatus::WrongRunKind,
            Error::ConfigError(_) => CsfStatus::ConfigError,
            Error::GenerationFailure(_) => CsfStatus::GenerationFailure,
            Error::Parse(_) => CsfStatus::ParseError,
            Error::Io(_) => CsfStatus::IoError,
        }
    }
}

/// Why a run stopped.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsfTermination {
    ReachedEnd = 0,
    SelfIntersection = 1,
    CurvatureBlowup = 2,
    StepFailure = 3,
}

/// A closed, positively oriented polygon.
pub struct CsfCurve(DiscreteCurve);

/// The snapshots of one run.
pub struct CsfTrajectory(Trajectory);

/// Flow configuration. Fill with [`csf_flow_config_default`] and edit.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsfFlowConfig {
    /// True: length-normalized flow (time t); false: plain flow (time τ).
    pub normalized: bool,
    pub n: usize,
    /// True selects the explicit scheme, false the semi-implicit one.
    pub explicit_scheme: bool,
    /// Fixed step, or the cap of the adaptive policy.
    pub dt: f64,
    /// Safety factor c of dt = min(dt, c / k_max²); 0 means fixed steps.
    pub adaptive_c: f64,
    pub t_end: f64,
    pub resample_every: usize,
    pub snapshot_every: usize,
    pub embed_check_every: usize,
}

/// Chord-ratio profile of a curve scaled to length 2π.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsfProfile {
    pub a_bar: f64,
    /// log ā; −∞ when `round`.
    pub t_bar: f64,
    /// ā = 0: the bound reduces to d ≥ 2 sin(ℓ/2).
    pub round: bool,
    pub diagonal_max: f64,
    pub off_diagonal_max: f64,
    /// Vertex indices of the maximizing pair (equal for a diagonal value),
    /// or −1 when there is none.
    pub argmax_i: i64,
    pub argmax_j: i64,
}

/// Outcome of the hard checks on a normalized trajectory.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsfChecks {
    pub distance_comparison: bool,
    /// Smallest Z over all snapshots and pairs.
    pub min_z: f64,
    pub abar_decay: bool,
    pub curvature_bound: bool,
    pub l2_bound: bool,
    /// max |∫(k−1)² ds − (∫k² ds − 4π + L)| over the snapshots.
    pub identity_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard<F: FnOnce() -> Result<(), CsfStatus>>(f: F) -> CsfStatus {
    set_last_error(String::new());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CsfStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_last_error("panic inside csflab".into());
            CsfStatus::Panic
        }
    }
}

fn fail(e: Error) -> CsfStatus {
    let status = CsfStatus::from(&e);
    set_last_error(format!("{}: {e}", e.kind()));
    status
}

fn invalid(msg: &str) -> CsfStatus {
    set_last_error(msg.to_string());
    CsfStatus::InvalidArgument
}

fn null(what: &str) -> CsfStatus {
    set_last_error(format!("{what} is null"));
    CsfStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, CsfStatus> {
    // SAFETY: the caller promises `p` is null or valid for reads.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, CsfStatus> {
    // SAFETY: the caller promises `p` is null or valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn csf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`) and returns the full message length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn csf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            // SAFETY: `buf` holds `len` bytes and `n < len`.
            unsafe {
                ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// Builds a curve from `n` interleaved `x, y` pairs. Clockwise input is
/// reversed.
///
/// # Safety
/// `xy` must point to `2 n` doubles; `out_curve` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn csf_curve_from_xy(xy: *const f64, n: usize, out_curve: *mut *mut CsfCurve) -> CsfStatus {
    guard(|| {
        let slot = unsafe { out(out_curve, "out_curve") }?;
        *slot = ptr::null_mut();
        if xy.is_null() {
            return Err(null("xy"));
        }
        // SAFETY: the caller promises 2n readable doubles.
        let flat = unsafe { std::slice::from_raw_parts(xy, 2 * n) };
        let pts: Vec<[f64; 2]> = flat.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
        let curve = DiscreteCurve::from_xy(&pts).map_err(fail)?;
        *slot = Box::into_raw(Box::new(CsfCurve(curve)));
        Ok(())
    })
}

/// Runs a named generator (`circle`, `ellipse`, `dumbbell`, `fourier`)
/// with `count` numeric parameters given as parallel key and value arrays.
///
/// # Safety
/// `name` and every key must be NUL-terminated strings; `keys` and
/// `values` must hold `count` entries (they may be null when `count` is 0).
#[no_mangle]
pub unsafe extern "C" fn csf_curve_generate(
    name: *const c_char,
    keys: *const *const c_char,
    values: *const f64,
    count: usize,
    out_curve: *mut *mut CsfCurve,
) -> CsfStatus {
    guard(|| {
        let slot = unsafe { out(out_curve, "out_curve") }?;
        *slot = ptr::null_mut();
        if name.is_null() {
            return Err(null("name"));
        }
        // SAFETY: NUL-terminated per the contract.
        let name = unsafe { CStr::from_ptr(name) }.to_str().map_err(|_| invalid("name is not UTF-8"))?;
        let mut params = BTreeMap::new();
        if count > 0 {
            if keys.is_null() || values.is_null() {
                return Err(null("keys or values"));
            }
            // SAFETY: `count` entries per the contract.
            let (ks, vs) = unsafe { (std::slice::from_raw_parts(keys, count), std::slice::from_raw_parts(values, count)) };
            for (&k, &v) in ks.iter().zip(vs) {
                if k.is_null() {
                    return Err(null("key"));
                }
                // SAFETY: NUL-terminated per the contract.
                let k = unsafe { CStr::from_ptr(k) }.to_str().map_err(|_| invalid("key is not UTF-8"))?;
                params.insert(k.to_string(), v);
            }
        }
        let curve = generate(name, &params).map_err(fail)?;
        *slot = Box::into_raw(Box::new(CsfCurve(curve)));
        Ok(())
    })
}

/// Releases a curve; null is ignored.
///
/// # Safety
/// `curve` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn csf_curve_free(curve: *mut CsfCurve) {
    if !curve.is_null() {
        // SAFETY: created by Box::into_raw and not yet freed.
        drop(unsafe { Box::from_raw(curve) });
    }
}

/// Vertex count, or 0 for null.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn csf_curve_len(curve: *const CsfCurve) -> usize {
    // SAFETY: null or live per the contract.
    unsafe { curve.as_ref() }.map_or(0, |c| c.0.len())
}

/// Copies the vertices as interleaved `x, y` into `xy`, which must hold
/// `2 · len` doubles (`capacity` counts doubles).
///
/// # Safety
/// `curve` must be live; `xy` must be valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn csf_curve_vertices(curve: *const CsfCurve, xy: *mut f64, capacity: usize) -> CsfStatus {
    guard(|| {
        let c = unsafe { deref(curve, "curve") }?;
        if xy.is_null() {
            return Err(null("xy"));
        }
        let need = 2 * c.0.len();
        if capacity < need {
            set_last_error(format!("need {need} doubles, got {capacity}"));
            return Err(CsfStatus::BufferTooSmall);
        }
        // SAFETY: `capacity ≥ need` writable doubles.
        let dst = unsafe { std::slice::from_raw_parts_mut(xy, need) };
        for (d, v) in dst.chunks_exact_mut(2).zip(c.0.vertices()) {
            d[0] = v.x;
            d[1] = v.y;
        }
        Ok(())
    })
}

/// Polygon perimeter, or NaN for null.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn csf_curve_length(curve: *const CsfCurve) -> f64 {
    // SAFETY: null or live per the contract.
    unsafe { curve.as_ref() }.map_or(f64::NAN, |c| c.0.perimeter())
}

/// Writes whether the polygon is free of self-intersections.
///
/// # Safety
/// `curve` must be live; `embedded` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn csf_curve_is_embedded(curve: *const CsfCurve, embedded: *mut bool) -> CsfStatus {
    guard(|| {
        let c = unsafe { deref(curve, "curve") }?;
        *unsafe { out(embedded, "embedded") }? = is_embedded(&c.0);
        Ok(())
    })
}

/// Profile of the curve after scaling it to length 2π.
///
/// # Safety
/// `curve` must be live; `result` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn csf_curve_profile(curve: *const CsfCurve, result: *mut CsfProfile) -> CsfStatus {
    guard(|| {
        let c = unsafe { deref(curve, "curve") }?;
        let slot = unsafe { out(result, "result") }?;
        if !is_embedded(&c.0) {
            return Err(fail(Error::NotEmbedded));
        }
        let frame = build_frame(&canonical_scale(&c.0)).map_err(fail)?;
        let p = profile(&frame, None).map_err(fail)?;
        let (i, j) = p.argmax.map_or((-1, -1), |a| (a.i as i64, a.j as i64));
        *slot = CsfProfile {
            a_bar: p.a_bar,
            t_bar: p.offset.t_bar,
            round: p.offset.round,
            diagonal_max: p.diagonal_max,
            off_diagonal_max: p.off_diagonal_max,
            argmax_i: i,
            argmax_j: j,
        };
        Ok(())
    })
}

/// f(x, t) = 2eᵗ arctan(e⁻ᵗ sin(x/2)) for x in [0, 2π].
///
/// # Safety
/// `value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn csf_f_eval(x: f64, t: f64, value: *mut f64) -> CsfStatus {
    guard(|| {
        let slot = unsafe { out(value, "value") }?;
        *slot = f_eval(x, t).map_err(fail)?.value;
        Ok(())
    })
}

/// The chord ratio a with d = f(ℓ, −log a), 0 < d ≤ ℓ ≤ π.
///
/// # Safety
/// `a` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn csf_a_solve(d: f64, l: f64, a: *mut f64) -> CsfStatus {
    guard(|| {
        let slot = unsafe { out(a, "a") }?;
        *slot = a_solve(d, l).map_err(fail)?.a;
        Ok(())
    })
}

/// Writes the default configuration: normalized, N = 512, semi-implicit,
/// dt = 1e−3, t_end = 6, resample every 20 steps, snapshot and check
/// every 10.
///
/// # Safety
/// `config` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn csf_flow_config_default(config: *mut CsfFlowConfig) -> CsfStatus {
    guard(|| {
        let d = FlowConfig::default();
        let dt = match d.dt {
            DtPolicy::Fixed { dt } => dt,
            DtPolicy::Adaptive { cap, .. } => cap,
        };
        *unsafe { out(config, "config") }? = CsfFlowConfig {
            normalized: d.kind == RunKind::Normalized,
            n: d.n,
            explicit_scheme: d.scheme == Scheme::Explicit,
            dt,
            adaptive_c: 0.0,
            t_end: d.t_end,
            resample_every: d.resample_every,
            snapshot_every: d.snapshot_every,
            embed_check_every: d.embed_check_every,
        };
        Ok(())
    })
}

impl CsfFlowConfig {
    fn to_config(self) -> FlowConfig {
        FlowConfig {
            kind: if self.normalized { RunKind::Normalized } else { RunKind::Unnormalized },
            n: self.n,
            scheme: if self.explicit_scheme { Scheme::Explicit } else { Scheme::SemiImplicit },
            dt: if self.adaptive_c > 0.0 {
                DtPolicy::Adaptive { c: self.adaptive_c, cap: self.dt }
            } else {
                DtPolicy::Fixed { dt: self.dt }
            },
            t_end: self.t_end,
            resample_every: self.resample_every,
            snapshot_every: self.snapshot_every,
            embed_check_every: self.embed_check_every,
        }
    }
}

/// Runs the flow. A run that stops early still succeeds; inspect
/// [`csf_trajectory_termination`].
///
/// # Safety
/// `curve` and `config` must be valid; `out_traj` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn csf_run(
    curve: *const CsfCurve,
    config: *const CsfFlowConfig,
    out_traj: *mut *mut CsfTrajectory,
) -> CsfStatus {
    guard(|| {
        let slot = unsafe { out(out_traj, "out_traj") }?;
        *slot = ptr::null_mut();
        let c = unsafe { deref(curve, "curve") }?;
        let cfg = unsafe { deref(config, "config") }?;
        let traj = run(&cfg.to_config(), &c.0).map_err(fail)?;
        *slot = Box::into_raw(Box::new(CsfTrajectory(traj)));
        Ok(())
    })
}

/// Releases a trajectory; null is ignored.
///
/// # Safety
/// `traj` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn csf_trajectory_free(traj: *mut CsfTrajectory) {
    if !traj.is_null() {
        // SAFETY: created by Box::into_raw and not yet freed.
        drop(unsafe { Box::from_raw(traj) });
    }
}

/// Number of snapshots, or 0 for null.
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn csf_trajectory_len(traj: *const CsfTrajectory) -> usize {
    // SAFETY: null or live per the contract.
    unsafe { traj.as_ref() }.map_or(0, |t| t.0.snapshots.len())
}

/// # Safety
/// `traj` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn csf_trajectory_termination(traj: *const CsfTrajectory) -> CsfTermination {
    // SAFETY: live per the contract.
    match unsafe { traj.as_ref() }.map(|t| &t.0.termination) {
        Some(Termination::ReachedEnd) => CsfTermination::ReachedEnd,
        Some(Termination::SelfIntersection { .. }) => CsfTermination::SelfIntersection,
        Some(Termination::CurvatureBlowup { .. }) => CsfTermination::CurvatureBlowup,
        Some(Termination::StepFailure { .. }) | None => CsfTermination::StepFailure,
    }
}

/// Time stamp and a copy of the curve of snapshot `index`; `out_curve`
/// may be null when only the time is wanted.
///
/// # Safety
/// `traj` must be live; `time` must be valid for writes; `out_curve` must
/// be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn csf_trajectory_snapshot(
    traj: *const CsfTrajectory,
    index: usize,
    time: *mut f64,
    out_curve: *mut *mut CsfCurve,
) -> CsfStatus {
    guard(|| {
        let t = unsafe { deref(traj, "traj") }?;
        let time = unsafe { out(time, "time") }?;
        let s = t.0.snapshots.get(index).ok_or_else(|| invalid("snapshot index out of range"))?;
        *time = s.time;
        if !out_curve.is_null() {
            // SAFETY: checked non-null; writable per the contract.
            unsafe { *out_curve = Box::into_raw(Box::new(CsfCurve(s.curve.clone()))) };
        }
        Ok(())
    })
}

/// Distance comparison, ā decay, curvature bound and L² bound on a
/// normalized trajectory, with t̄ from its first snapshot.
///
/// # Safety
/// `traj` must be live; `result` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn csf_trajectory_check(traj: *const CsfTrajectory, result: *mut CsfChecks) -> CsfStatus {
    guard(|| {
        let t = unsafe { deref(traj, "traj") }?;
        let slot = unsafe { out(result, "result") }?;
        let p = TrajectoryProfiles::compute(&t.0).map_err(fail)?;
        let dc = distance_comparison_report(&p);
        let cb = curvature_bound_report(&t.0, &p.offset).map_err(fail)?;
        let cm = convergence_metrics(&t.0, &p.offset).map_err(fail)?;
        *slot = CsfChecks {
            distance_comparison: dc.pass,
            min_z: p.min_z().map_or(f64::INFINITY, |(_, m)| m.value),
            abar_decay: abar_decay_report(&p).pass,
            curvature_bound: cb.pass,
            l2_bound: cm.pass(),
            identity_residual: cm.identity_max_residual,
        };
        Ok(())
    })
}

/// Runs the identity suite on a `grid_x × grid_t` grid; `pass` receives
/// whether every identity held.
///
/// # Safety
/// `pass` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn csf_verify_identities(grid_x: usize, grid_t: usize, pass: *mut bool) -> CsfStatus {
    guard(|| {
        let slot = unsafe { out(pass, "pass") }?;
        let suite = cmd_verify_identities(&IdentityOptions { grid_x, grid_t, perturb: 0.0 }).map_err(fail)?;
        *slot = suite.pass();
        Ok(())
    })
}
