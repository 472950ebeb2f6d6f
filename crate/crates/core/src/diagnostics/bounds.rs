//! The distance comparison, the decay of ā and the curvature bound,
//! evaluated along a normalized trajectory.

use rayon::prelude::*;
use serde::Serialize;

use crate::comparison::{profile, ComparisonOffset, MinZ, ProfileSummary};
use crate::dynamics::{RunKind, Trajectory};
use crate::Result;

/// Slack on log ā(t) + t.
pub const TOL_LOG: f64 = 0.05;
/// Relative slack of the curvature bound.
pub const TOL_CURVATURE: f64 = 0.02;

/// Discretization credit `10·(2π/N)²` for the distance comparison.
pub fn tol_geom(n: usize) -> f64 {
    10.0 * (crate::TWO_PI / n as f64).powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundPoint {
    pub time: f64,
    pub measured: f64,
    pub bound: f64,
    /// bound − measured, divided by the bound for relative checks.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub pass: bool,
    pub worst_margin: f64,
    pub tolerance: f64,
    pub relative: bool,
    pub series: Vec<BoundPoint>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub(crate) fn assemble(name: &str, tolerance: f64, relative: bool, series: Vec<BoundPoint>, notes: Vec<String>) -> Self {
        let worst_margin = series.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min);
        let pass = series.iter().all(|p| p.margin >= -tolerance);
        BoundReport { name: name.into(), pass, worst_margin, tolerance, relative, series, notes }
    }

    pub fn worst(&self) -> Option<&BoundPoint> {
        self.series.iter().min_by(|a, b| a.margin.total_cmp(&b.margin))
    }
}

/// Per-snapshot profiles with min Z against the offset of the first
/// snapshot.
#[derive(Clone, Debug)]
pub struct TrajectoryProfiles {
    pub offset: ComparisonOffset,
    pub times: Vec<f64>,
    pub summaries: Vec<ProfileSummary>,
    pub n: usize,
}

impl TrajectoryProfiles {
    pub fn compute(traj: &Trajectory) -> Result<Self> {
        traj.require(RunKind::Normalized)?;
        let first = profile(&traj.first().frame, None)?;
        let offset = first.offset;
        let summaries = traj
            .snapshots
            .par_iter()
            .map(|s| profile(&s.frame, Some((s.time, &offset))))
            .collect::<Result<Vec<_>>>()?;
        Ok(TrajectoryProfiles {
            offset,
            times: traj.times(),
            summaries,
            n: traj.first().curve.len(),
        })
    }

    /// Smallest Z over every snapshot and pair, with its time.
    pub fn min_z(&self) -> Option<(f64, MinZ)> {
        self.times
            .iter()
            .zip(&self.summaries)
            .filter_map(|(&t, s)| s.min_z.map(|m| (t, m)))
            .fold(None, |acc: Option<(f64, MinZ)>, cur| match acc {
                Some(a) if a.1.value <= cur.1.value => Some(a),
                _ => Some(cur),
            })
    }
}

/// d ≥ f(ℓ, t − t̄) for every pair at every snapshot, with t̄ from the
/// first snapshot; `measured` is −min Z and `bound` is 0.
pub fn distance_comparison_report(p: &TrajectoryProfiles) -> BoundReport {
    let tol = tol_geom(p.n);
    let series = p
        .times
        .iter()
        .zip(&p.summaries)
        .map(|(&time, s)| {
            let z = s.min_z.map_or(f64::INFINITY, |m| m.value);
            BoundPoint { time, measured: -z, bound: 0.0, margin: z }
        })
        .collect();
    let mut notes = vec![format!("t_bar = {} (a_bar(0) = {})", p.offset.t_bar, p.offset.a_bar())];
    if let Some((t, m)) = p.min_z() {
        notes.push(format!(
            "min Z = {:.6e} at t = {t} on pair ({}, {}) with chord {:.6e} and arc {:.6e}",
            m.value, m.pair.i, m.pair.j, m.chord, m.arc
        ));
    }
    BoundReport::assemble("distance_comparison", tol, false, series, notes)
}

/// log ā(t) ≤ t̄ − t; snapshots with ā(t) = 0 satisfy it trivially.
pub fn abar_decay_report(p: &TrajectoryProfiles) -> BoundReport {
    let series = p
        .times
        .iter()
        .zip(&p.summaries)
        .filter(|(_, s)| s.a_bar > 0.0)
        .map(|(&time, s)| {
            let measured = s.a_bar.ln();
            let bound = p.offset.t_bar - time;
            BoundPoint { time, measured, bound, margin: bound - measured }
        })
        .collect::<Vec<_>>();
    let skipped = p.summaries.iter().filter(|s| s.a_bar == 0.0).count();
    let notes = vec![format!("{skipped} snapshots with a_bar = 0 skipped")];
    BoundReport::assemble("abar_decay", TOL_LOG, false, series, notes)
}

/// The curvature bound `1 + 2e^{−2(t − t̄)}` (just 1 when ā = 0).
pub fn curvature_bound(offset: &ComparisonOffset, t: f64) -> f64 {
    if offset.round {
        1.0
    } else {
        1.0 + 2.0 * (-2.0 * (t - offset.t_bar)).exp()
    }
}

/// sup k² ≤ 1 + 2e^{−2(t − t̄)}, relative tolerance 2%.
pub fn curvature_bound_report(traj: &Trajectory, offset: &ComparisonOffset) -> Result<BoundReport> {
    traj.require(RunKind::Normalized)?;
    let series: Vec<BoundPoint> = traj
        .snapshots
        .iter()
        .map(|s| {
            let measured = s.frame.k_abs_max().powi(2);
            let bound = curvature_bound(offset, s.time);
            BoundPoint { time: s.time, measured, bound, margin: (bound - measured) / bound }
        })
        .collect();
    let monotone = series
        .windows(2)
        .filter(|w| w[0].time >= 1.0)
        .all(|w| w[1].bound - w[1].measured >= w[0].bound - w[0].measured);
    let notes = vec![format!(
        "absolute margin {} non-decreasing after t = 1 (empirical, not asserted)",
        if monotone { "is" } else { "is NOT" }
    )];
    Ok(BoundReport::assemble("curvature_bound", TOL_CURVATURE, true, series, notes))
}

pub fn check_distance_comparison(traj: &Trajectory) -> Result<BoundReport> {
    Ok(distance_comparison_report(&TrajectoryProfiles::compute(traj)?))
}

pub fn check_abar_decay(traj: &Trajectory) -> Result<BoundReport> {
    Ok(abar_decay_report(&TrajectoryProfiles::compute(traj)?))
}

pub fn check_curvature_bound(traj: &Trajectory) -> Result<BoundReport> {
    traj.require(RunKind::Normalized)?;
    let offset = profile(&traj.first().frame, None)?.offset;
    curvature_bound_report(traj, &offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run, FlowConfig, RunKind};
    use crate::geometry::{DiscreteCurve, Vec2};
    use crate::{Error, TWO_PI};

    fn polygon(n: usize, f: impl Fn(f64) -> Vec2) -> DiscreteCurve {
        DiscreteCurve::new((0..n).map(|i| f(TWO_PI * i as f64 / n as f64)).collect()).unwrap()
    }

    #[test]
    fn tolerance_scales_with_mesh() {
        assert!((tol_geom(512) - 1.5059821168654417e-3).abs() < 1e-15);
        assert!((tol_geom(128) / tol_geom(256) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn circle_run_passes_trivially() {
        let config = FlowConfig { n: 64, t_end: 0.2, ..FlowConfig::default() };
        let traj = run(&config, &polygon(64, Vec2::from_angle)).unwrap();
        let p = TrajectoryProfiles::compute(&traj).unwrap();
        assert!(p.offset.round);
        let dc = distance_comparison_report(&p);
        assert!(dc.pass && dc.worst_margin >= -1e-9, "{dc:?}");
        let ad = abar_decay_report(&p);
        assert!(ad.pass && ad.series.is_empty());
        let cb = curvature_bound_report(&traj, &p.offset).unwrap();
        assert!(cb.pass && cb.series.iter().all(|b| b.bound == 1.0));
    }

    #[test]
    fn ellipse_holds_at_start() {
        let config = FlowConfig { n: 128, t_end: 0.3, ..FlowConfig::default() };
        let traj = run(&config, &polygon(128, |u| Vec2::new(2.0 * u.cos(), u.sin()))).unwrap();
        let p = TrajectoryProfiles::compute(&traj).unwrap();
        assert!(!p.offset.round);
        // t̄ comes from the first snapshot, so Z = 0 is attained there
        let (t, m) = p.min_z().unwrap();
        assert!(m.value >= -tol_geom(128));
        assert!(t < 0.05 || m.value > 0.0);
        for r in [distance_comparison_report(&p), abar_decay_report(&p), curvature_bound_report(&traj, &p.offset).unwrap()] {
            assert!(r.pass, "{r:?}");
        }
        // k_max(0)² = 1 + 2ā² because the maximum sits on the diagonal
        let cb = curvature_bound_report(&traj, &p.offset).unwrap();
        assert!(cb.series[0].margin.abs() < 1e-12, "{:?}", cb.series[0]);
    }

    #[test]
    fn unnormalized_runs_are_rejected() {
        let config = FlowConfig { kind: RunKind::Unnormalized, n: 64, t_end: 0.05, ..FlowConfig::default() };
        let traj = run(&config, &polygon(64, Vec2::from_angle)).unwrap();
        let e = Error::WrongRunKind { expected: "normalized" };
        assert_eq!(check_distance_comparison(&traj).unwrap_err(), e);
        assert_eq!(check_abar_decay(&traj).unwrap_err(), e);
        assert_eq!(check_curvature_bound(&traj).unwrap_err(), e);
    }

    #[test]
    fn report_assembly() {
        let pts = vec![
            BoundPoint { time: 0.0, measured: 1.0, bound: 2.0, margin: 1.0 },
            BoundPoint { time: 1.0, measured: 2.0, bound: 1.99, margin: -0.01 },
        ];
        let r = BoundReport::assemble("x", 0.02, false, pts.clone(), vec![]);
        assert!(r.pass);
        assert_eq!(r.worst_margin, -0.01);
        assert_eq!(r.worst().unwrap().time, 1.0);
        assert!(!BoundReport::assemble("x", 0.005, false, pts, vec![]).pass);
    }
}
