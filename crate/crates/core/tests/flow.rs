//! Properties of the two flows on whole runs.

use csflab::diagnostics::frame_metrics;
use csflab::dynamics::{
    normalize_trajectory, recover_unnormalized, run, DtPolicy, FlowConfig, RunKind, Scheme, Trajectory,
};
use csflab::geometry::canonical_scale;
use csflab::harness::GeneratorSpec;
use csflab::TWO_PI;

fn unnormalized(n: usize, scheme: Scheme, dt: f64, t_end: f64) -> FlowConfig {
    FlowConfig {
        kind: RunKind::Unnormalized,
        n,
        scheme,
        dt: DtPolicy::Fixed { dt },
        t_end,
        snapshot_every: 1,
        ..FlowConfig::default()
    }
}

/// Largest error of the circumradius against √(1 − 2cτ).
fn circle_radius_error(traj: &Trajectory, c: f64) -> f64 {
    traj.snapshots
        .iter()
        .map(|s| {
            let r = s.curve.vertices().iter().map(|p| p.norm()).sum::<f64>() / s.curve.len() as f64;
            (r - (1.0 - 2.0 * c * s.time).sqrt()).abs()
        })
        .fold(0.0, f64::max)
}

/// Halving dt halves the time-stepping error. On a regular N-gon the
/// semi-implicit operator gives exactly dR/dτ = −1/R, while the explicit
/// turning-angle curvature is c_N/R with c_N = (π/N)/sin(π/N), so each
/// scheme is measured against its own semi-discrete solution.
#[test]
fn shrinking_circle_error_is_first_order_in_dt() {
    let n = 64;
    let circle = GeneratorSpec::Circle { r: 1.0, n }.generate().unwrap();
    let c_n = (std::f64::consts::PI / n as f64) / (std::f64::consts::PI / n as f64).sin();
    // dt stays below the explicit limit 0.25·h² down to τ = 0.4
    for (scheme, c, dt0) in [(Scheme::SemiImplicit, 1.0, 4e-3), (Scheme::Explicit, c_n, 4e-4)] {
        let e1 = circle_radius_error(&run(&unnormalized(n, scheme, dt0, 0.4), &circle).unwrap(), c);
        let e2 = circle_radius_error(&run(&unnormalized(n, scheme, dt0 / 2.0, 0.4), &circle).unwrap(), c);
        let order = (e1 / e2).log2();
        assert!(order >= 0.9, "{scheme:?}: {e1} {e2} order {order}");
    }
}

#[test]
fn ellipse_area_drops_at_rate_two_pi() {
    let ellipse = GeneratorSpec::Ellipse { a: 2.0, b: 1.0, n: 512 }.generate().unwrap();
    let config = unnormalized(512, Scheme::SemiImplicit, 1e-4, 0.1);
    let traj = run(&config, &ellipse).unwrap();
    let (a0, a1) = (traj.first().frame.area(), traj.last().frame.area());
    let slope = (a1 - a0) / (traj.last().time - traj.first().time);
    assert!((slope / -TWO_PI - 1.0).abs() < 0.01, "slope {slope}");
    assert!(traj.snapshots.windows(2).all(|w| w[1].frame.area() < w[0].frame.area()));
}

#[test]
fn normalized_ellipse_rounds_out() {
    let ellipse = GeneratorSpec::Ellipse { a: 2.0, b: 1.0, n: 256 }.generate().unwrap();
    let config = FlowConfig { n: 256, t_end: 8.0, ..FlowConfig::default() };
    let traj = run(&config, &ellipse).unwrap();
    assert!(traj.termination.is_complete());
    for s in &traj.snapshots {
        assert!((s.frame.length / TWO_PI - 1.0).abs() < 1e-9);
    }
    let mk2: Vec<f64> = traj.snapshots.iter().map(|s| s.frame.mean_k2).collect();
    assert!(mk2.windows(2).all(|w| w[1] <= w[0] + 1e-12), "⟨k²⟩ not monotone");
    let at6 = traj.snapshots.iter().find(|s| (s.time - 6.0).abs() < 1e-9).unwrap();
    assert!((at6.frame.mean_k2 - 1.0).abs() < 1e-3);
    let end = frame_metrics(traj.last().time, &traj.last().frame);
    assert!(end.sup_dev < 0.01, "{end:?}");
    assert!(end.circle_dev < 1e-3, "{end:?}");
    assert!((end.radius - 1.0).abs() < 1e-3);
}

/// Worst relative time error and worst vertex error (relative to the
/// initial scale) of normalize followed by recover on an unnormalized run.
fn round_trip_error(a: f64, b: f64, n: usize) -> (f64, f64) {
    let curve = canonical_scale(&GeneratorSpec::Ellipse { a, b, n }.generate().unwrap());
    let config = FlowConfig {
        kind: RunKind::Unnormalized,
        n,
        dt: DtPolicy::Fixed { dt: 1e-5 },
        t_end: 0.05,
        snapshot_every: 10,
        ..FlowConfig::default()
    };
    let unnorm = run(&config, &curve).unwrap();
    let (norm, clock) = normalize_trajectory(&unnorm).unwrap();
    assert!(clock.t.windows(2).all(|w| w[1] > w[0]));
    assert!(clock.lambda.windows(2).all(|w| w[1] < w[0]));
    let (back, _) = recover_unnormalized(&norm, unnorm.first().frame.length).unwrap();
    let mut worst = (0.0f64, 0.0f64);
    for (p, q) in unnorm.snapshots.iter().zip(&back.snapshots) {
        if p.time > 0.0 {
            worst.0 = worst.0.max((p.time - q.time).abs() / p.time);
        }
        let dev = p.curve.vertices().iter().zip(q.curve.vertices()).map(|(x, y)| (*x - *y).norm());
        worst.1 = worst.1.max(dev.fold(0.0, f64::max));
    }
    worst
}

// The recovered clock integrates ⟨k²⟩ while the forward map reads the
// polygon length, and on a polygon dL/dτ = −∫k² ds holds only up to the
// spatial error. The gap is tiny on a circle and shrinks with N elsewhere.
#[test]
fn clock_maps_round_trip_on_a_real_run() {
    let (tc, xc) = round_trip_error(1.0, 1.0, 128);
    assert!(tc < 1e-4 && xc < 1e-4, "{tc} {xc}");
    let (t1, x1) = round_trip_error(2.0, 1.0, 64);
    let (t2, x2) = round_trip_error(2.0, 1.0, 128);
    assert!(t2 < 0.6 * t1 && x2 < 0.6 * x1, "{t1} {t2} {x1} {x2}");
    assert!(t2 < 5e-3 && x2 < 5e-3);
}

#[test]
fn explicit_and_semi_implicit_agree() {
    let ellipse = GeneratorSpec::Ellipse { a: 2.0, b: 1.0, n: 64 }.generate().unwrap();
    let semi = FlowConfig { n: 64, t_end: 0.5, dt: DtPolicy::Fixed { dt: 1e-4 }, ..FlowConfig::default() };
    let expl = FlowConfig { scheme: Scheme::Explicit, ..semi.clone() };
    let a = run(&semi, &ellipse).unwrap();
    let b = run(&expl, &ellipse).unwrap();
    let ka = a.last().frame.k_max();
    let kb = b.last().frame.k_max();
    assert!((ka - kb).abs() < 1e-2 * ka, "{ka} {kb}");
    assert!((a.last().frame.mean_k2 - b.last().frame.mean_k2).abs() < 1e-3);
}

#[test]
fn adaptive_policy_tracks_curvature() {
    let ellipse = GeneratorSpec::Ellipse { a: 3.0, b: 1.0, n: 128 }.generate().unwrap();
    let config = FlowConfig {
        kind: RunKind::Unnormalized,
        n: 128,
        dt: DtPolicy::Adaptive { c: 0.2, cap: 1e-3 },
        t_end: 0.5,
        ..FlowConfig::default()
    };
    let traj = run(&config, &ellipse).unwrap();
    assert!(traj.termination.is_complete(), "{:?}", traj.termination);
    assert!((traj.last().time - 0.5).abs() < 1e-12);
}
