use std::ffi::{c_char, CString};
use std::ptr;

use csflab_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let n = unsafe { csf_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

fn generate(name: &str, params: &[(&str, f64)]) -> *mut CsfCurve {
    let name = CString::new(name).unwrap();
    let keys: Vec<CString> = params.iter().map(|p| CString::new(p.0).unwrap()).collect();
    let key_ptrs: Vec<*const c_char> = keys.iter().map(|k| k.as_ptr()).collect();
    let values: Vec<f64> = params.iter().map(|p| p.1).collect();
    let mut curve = ptr::null_mut();
    let s = unsafe { csf_curve_generate(name.as_ptr(), key_ptrs.as_ptr(), values.as_ptr(), params.len(), &mut curve) };
    assert_eq!(s, CsfStatus::Ok, "{}", last_error());
    curve
}

#[test]
fn curve_round_trip_through_buffers() {
    let n = 32;
    let xy: Vec<f64> = (0..n)
        .flat_map(|i| {
            let u = std::f64::consts::TAU * i as f64 / n as f64;
            [2.0 * u.cos(), u.sin()]
        })
        .collect();
    let mut curve = ptr::null_mut();
    assert_eq!(unsafe { csf_curve_from_xy(xy.as_ptr(), n, &mut curve) }, CsfStatus::Ok);
    assert_eq!(unsafe { csf_curve_len(curve) }, n);
    let mut back = vec![0.0; 2 * n];
    assert_eq!(unsafe { csf_curve_vertices(curve, back.as_mut_ptr(), back.len()) }, CsfStatus::Ok);
    assert_eq!(back, xy);
    let mut small = vec![0.0; 3];
    assert_eq!(unsafe { csf_curve_vertices(curve, small.as_mut_ptr(), 3) }, CsfStatus::BufferTooSmall);
    let mut emb = false;
    assert_eq!(unsafe { csf_curve_is_embedded(curve, &mut emb) }, CsfStatus::Ok);
    assert!(emb);
    unsafe { csf_curve_free(curve) };
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut curve = ptr::null_mut();
    let xy = [0.0, 0.0, 1.0, 0.0];
    assert_eq!(unsafe { csf_curve_from_xy(xy.as_ptr(), 2, &mut curve) }, CsfStatus::DegenerateCurve);
    assert!(curve.is_null());
    assert!(last_error().starts_with("DegenerateCurve"), "{}", last_error());
    assert_eq!(unsafe { csf_curve_from_xy(ptr::null(), 8, &mut curve) }, CsfStatus::NullPointer);
    let mut a = 0.0;
    assert_eq!(unsafe { csf_a_solve(2.0, 1.0, &mut a) }, CsfStatus::DomainError);
    let name = CString::new("spiral").unwrap();
    let s = unsafe { csf_curve_generate(name.as_ptr(), ptr::null(), ptr::null(), 0, &mut curve) };
    assert_eq!(s, CsfStatus::ConfigError);
    assert!(last_error().contains("spiral"));
    // null handles are tolerated where documented
    unsafe {
        csf_curve_free(ptr::null_mut());
        csf_trajectory_free(ptr::null_mut());
    }
    assert_eq!(unsafe { csf_curve_len(ptr::null()) }, 0);
}

#[test]
fn comparison_function_values() {
    let mut v = 0.0;
    assert_eq!(unsafe { csf_f_eval(std::f64::consts::PI, 0.0, &mut v) }, CsfStatus::Ok);
    assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    let mut a = 0.0;
    assert_eq!(unsafe { csf_a_solve(1.0, std::f64::consts::PI, &mut a) }, CsfStatus::Ok);
    assert!((a - 2.331_122_370_414_422_6).abs() < 1e-11);
    let mut pass = false;
    assert_eq!(unsafe { csf_verify_identities(60, 21, &mut pass) }, CsfStatus::Ok);
    assert!(pass);
}

#[test]
fn profile_of_ellipse() {
    let curve = generate("ellipse", &[("a", 2.0), ("b", 1.0), ("n", 256.0)]);
    let mut p = CsfProfile {
        a_bar: 0.0,
        t_bar: 0.0,
        round: true,
        diagonal_max: 0.0,
        off_diagonal_max: 0.0,
        argmax_i: 0,
        argmax_j: 0,
    };
    assert_eq!(unsafe { csf_curve_profile(curve, &mut p) }, CsfStatus::Ok);
    assert!(!p.round);
    assert_eq!(p.argmax_i, p.argmax_j, "diagonal maximum at a vertex");
    assert!((p.t_bar - p.a_bar.ln()).abs() < 1e-15);
    unsafe { csf_curve_free(curve) };
}

#[test]
fn short_run_and_checks() {
    let curve = generate("ellipse", &[("n", 128.0)]);
    let mut cfg = std::mem::MaybeUninit::<CsfFlowConfig>::uninit();
    assert_eq!(unsafe { csf_flow_config_default(cfg.as_mut_ptr()) }, CsfStatus::Ok);
    let mut cfg = unsafe { cfg.assume_init() };
    assert!(cfg.normalized && !cfg.explicit_scheme && cfg.n == 512);
    cfg.n = 128;
    cfg.t_end = 0.5;
    let mut traj = ptr::null_mut();
    assert_eq!(unsafe { csf_run(curve, &cfg, &mut traj) }, CsfStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { csf_trajectory_termination(traj) }, CsfTermination::ReachedEnd);
    let len = unsafe { csf_trajectory_len(traj) };
    assert_eq!(len, 51);
    let mut t = 0.0;
    let mut snap = ptr::null_mut();
    assert_eq!(unsafe { csf_trajectory_snapshot(traj, len - 1, &mut t, &mut snap) }, CsfStatus::Ok);
    assert!((t - 0.5).abs() < 1e-12);
    assert!((unsafe { csf_curve_length(snap) } - std::f64::consts::TAU).abs() < 1e-9);
    assert_eq!(unsafe { csf_trajectory_snapshot(traj, len, &mut t, ptr::null_mut()) }, CsfStatus::InvalidArgument);
    let mut checks = std::mem::MaybeUninit::<CsfChecks>::uninit();
    assert_eq!(unsafe { csf_trajectory_check(traj, checks.as_mut_ptr()) }, CsfStatus::Ok);
    let checks = unsafe { checks.assume_init() };
    assert!(checks.distance_comparison && checks.abar_decay && checks.curvature_bound && checks.l2_bound);
    assert!(checks.identity_residual < 1e-8);
    unsafe {
        csf_curve_free(snap);
        csf_trajectory_free(traj);
        csf_curve_free(curve);
    }
}

#[test]
fn unnormalized_trajectory_is_rejected_by_checks() {
    let curve = generate("circle", &[("n", 64.0)]);
    let mut cfg = std::mem::MaybeUninit::<CsfFlowConfig>::uninit();
    unsafe { csf_flow_config_default(cfg.as_mut_ptr()) };
    let mut cfg = unsafe { cfg.assume_init() };
    cfg.normalized = false;
    cfg.n = 64;
    cfg.t_end = 0.01;
    let mut traj = ptr::null_mut();
    assert_eq!(unsafe { csf_run(curve, &cfg, &mut traj) }, CsfStatus::Ok);
    let mut checks = std::mem::MaybeUninit::<CsfChecks>::uninit();
    assert_eq!(unsafe { csf_trajectory_check(traj, checks.as_mut_ptr()) }, CsfStatus::WrongRunKind);
    unsafe {
        csf_trajectory_free(traj);
        csf_curve_free(curve);
    }
}
