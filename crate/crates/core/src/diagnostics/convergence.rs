//! Convergence of a normalized trajectory to a unit circle.

use serde::Serialize;

use super::bounds::{BoundPoint, BoundReport};
use crate::comparison::ComparisonOffset;
use crate::dynamics::{RunKind, Trajectory};
use crate::geometry::{CurveFrame, Vec2};
use crate::{Error, Result};

/// Relative slack of the L² bound.
pub const TOL_L2: f64 = 0.05;
/// Tolerance of ∫(k−1)² ds = ∫k² ds − 4π + L.
pub const IDENTITY_TOL: f64 = 1e-8;
/// Absolute slack of the L² bound when ā = 0 and the bound itself is 0.
pub const ROUND_L2_FLOOR: f64 = 1e-12;
/// Fitted decay rates below this are flagged.
pub const MIN_DECAY_RATE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub time: f64,
    /// ∫(k − 1)² ds
    pub l2_dev: f64,
    /// ∫k² ds − 4π + L
    pub l2_identity: f64,
    pub identity_residual: f64,
    /// max |k − 1|
    pub sup_dev: f64,
    pub center: Vec2,
    pub radius: f64,
    /// max over vertices of ||p − c| − r|
    pub circle_dev: f64,
    /// max |k_{i+1} − k_i| / h_i
    pub dk_ds: f64,
}

/// Metrics of one frame.
pub fn frame_metrics(time: f64, f: &CurveFrame) -> ConvergencePoint {
    let l2_dev: f64 = f
        .curvature
        .iter()
        .zip(&f.dual_lengths)
        .map(|(k, w)| (k - 1.0) * (k - 1.0) * w)
        .sum();
    let l2_identity = f.integral_k2() - 4.0 * std::f64::consts::PI + f.length;
    let sup_dev = f.curvature.iter().fold(0.0f64, |m, k| m.max((k - 1.0).abs()));
    let n = f.len() as f64;
    let center = f.positions.iter().fold(Vec2::new(0.0, 0.0), |a, p| a + *p) * (1.0 / n);
    let radius = f.positions.iter().map(|p| (*p - center).norm()).sum::<f64>() / n;
    let circle_dev = f
        .positions
        .iter()
        .fold(0.0f64, |m, p| m.max(((*p - center).norm() - radius).abs()));
    let m = f.len();
    let dk_ds = (0..m).fold(0.0f64, |acc, i| {
        acc.max((f.curvature[(i + 1) % m] - f.curvature[i]).abs() / f.edge_lengths[i])
    });
    ConvergencePoint {
        time,
        l2_dev,
        l2_identity,
        identity_residual: (l2_dev - l2_identity).abs(),
        sup_dev,
        center,
        radius,
        circle_dev,
        dk_ds,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceMetrics {
    pub series: Vec<ConvergencePoint>,
    pub identity_max_residual: f64,
    pub identity_pass: bool,
    pub l2_bound: BoundReport,
}

impl ConvergenceMetrics {
    pub fn last(&self) -> &ConvergencePoint {
        self.series.last().expect("non-empty trajectory")
    }

    pub fn pass(&self) -> bool {
        self.identity_pass && self.l2_bound.pass
    }
}

/// `2e^{−2(t − t̄)}`, or 0 when ā = 0.
pub fn l2_bound(offset: &ComparisonOffset, t: f64) -> f64 {
    if offset.round {
        0.0
    } else {
        2.0 * (-2.0 * (t - offset.t_bar)).exp()
    }
}

pub fn convergence_metrics(traj: &Trajectory, offset: &ComparisonOffset) -> Result<ConvergenceMetrics> {
    traj.require(RunKind::Normalized)?;
    let series: Vec<ConvergencePoint> = traj.snapshots.iter().map(|s| frame_metrics(s.time, &s.frame)).collect();
    let identity_max_residual = series.iter().fold(0.0f64, |m, p| m.max(p.identity_residual));
    let bounds = series
        .iter()
        .map(|p| {
            let bound = l2_bound(offset, p.time);
            let margin = if bound > 0.0 { (bound - p.l2_dev) / bound } else { ROUND_L2_FLOOR - p.l2_dev };
            BoundPoint { time: p.time, measured: p.l2_dev, bound, margin }
        })
        .collect();
    let notes = vec![format!("identity max residual {identity_max_residual:e} (tolerance {IDENTITY_TOL:e})")];
    let tol = if offset.round { 0.0 } else { TOL_L2 };
    let l2_bound = BoundReport::assemble("l2_bound", tol, !offset.round, bounds, notes);
    Ok(ConvergenceMetrics {
        identity_pass: identity_max_residual <= IDENTITY_TOL,
        identity_max_residual,
        series,
        l2_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeDecay {
    /// (t, sup |∂k/∂s|)
    pub series: Vec<(f64, f64)>,
    /// −slope of log sup|∂k/∂s| against t over the fit window.
    pub fitted_rate: f64,
    pub fit_window: (f64, f64),
    pub fit_points: usize,
    /// Fitted rate below [`MIN_DECAY_RATE`]; informational only.
    pub flagged: bool,
}

/// Log-linear fit of sup|∂k/∂s| over t ∈ [1, t_end].
pub fn derivative_decay(traj: &Trajectory) -> Result<DerivativeDecay> {
    traj.require(RunKind::Normalized)?;
    let t_end = traj.last().time;
    if t_end < 2.0 {
        return Err(Error::ConfigError(format!("derivative decay needs t_end >= 2, got {t_end}")));
    }
    let series: Vec<(f64, f64)> = traj.snapshots.iter().map(|s| (s.time, frame_metrics(s.time, &s.frame).dk_ds)).collect();
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, v)| *t >= 1.0 && *v > 0.0)
        .map(|&(t, v)| (t, v.ln()))
        .collect();
    let fitted_rate = -least_squares_slope(&pts);
    Ok(DerivativeDecay {
        flagged: !(fitted_rate >= MIN_DECAY_RATE),
        fit_window: (1.0, t_end),
        fit_points: pts.len(),
        fitted_rate,
        series,
    })
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// First snapshot time from which k_min stays positive.
pub fn convexity_time(traj: &Trajectory) -> Option<f64> {
    let mut since = None;
    for s in &traj.snapshots {
        if s.frame.k_min() > 0.0 {
            since.get_or_insert(s.time);
        } else {
            since = None;
        }
    }
    since
}
