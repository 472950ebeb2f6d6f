//! The work behind each CLI subcommand, independent of argument parsing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::generate::GeneratorSpec;
use super::spec::{Check, ConfigEcho, CurveSource, RunSpec};
use crate::comparison::identities::{
    check_f_shape, check_g_positive, check_h_convexity, check_l_dominates, check_ltilde, check_ltilde_fd,
    check_subadditive, Grid,
};
use crate::comparison::{check_taylor_lemma1, profile, profile_table, ComparisonFn, Ellipse, IdentityReport};
use crate::diagnostics::{
    abar_decay_report, convergence_metrics, convexity_time, curvature_bound_report, derivative_decay,
    distance_comparison_report, fill_series, BoundReport, TrajectoryProfiles,
};
use crate::dynamics::persist::{base_series, curve_hash};
use crate::dynamics::{
    normalize_trajectory, run, step_normalized, DtPolicy, FlowConfig, RunDirectory, RunKind, Scheme, Snapshot,
    Termination, Trajectory,
};
use crate::geometry::io::{fmt_f64, load_curve};
use crate::geometry::{build_frame, canonical_scale, is_embedded, resample_uniform, DiscreteCurve};
use crate::{Error, Result, CODE_VERSION};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub hard: bool,
    pub pass: bool,
    pub summary: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub initial_curve_hash: String,
    pub termination: Termination,
    pub steps: usize,
    pub snapshots: usize,
    pub checks: Vec<CheckOutcome>,
    /// First time from which k_min stays positive, if any.
    pub convex_from: Option<f64>,
}

impl RunOutcome {
    pub fn completed(&self) -> bool {
        self.termination.is_complete()
    }

    /// Flow completed and every hard check passed.
    pub fn passed(&self) -> bool {
        self.completed() && self.checks.iter().all(|c| c.pass || !c.hard)
    }
}

fn bound_outcome(check: Check, r: &BoundReport) -> CheckOutcome {
    let at = r.worst().map_or(String::from("no snapshots"), |w| {
        format!("worst margin {:.6e} at t = {:.4}", r.worst_margin, w.time)
    });
    CheckOutcome { check, hard: true, pass: r.pass, summary: format!("{at} (tolerance {:e})", r.tolerance) }
}

/// Generates or loads the curve, runs the flow, evaluates the requested
/// checks and writes the run directory.
///
/// Checks on un-normalized runs are evaluated on the normalized
/// counterpart of the trajectory.
pub fn cmd_run(spec: &RunSpec) -> Result<RunOutcome> {
    spec.validate()?;
    let loaded = spec.source.load()?;
    if !is_embedded(&loaded) {
        return Err(Error::NotEmbedded);
    }
    let hash = curve_hash(&loaded);
    let initial = canonical_scale(&loaded);
    let dir = RunDirectory::create(&spec.out_dir)?;
    dir.write_config(&ConfigEcho {
        spec: spec.clone(),
        initial_curve_hash: hash.clone(),
        code_version: CODE_VERSION.to_string(),
    })?;

    let traj = run(&spec.config, &initial)?;
    let normalized;
    let diag: &Trajectory = match traj.kind {
        RunKind::Normalized => &traj,
        RunKind::Unnormalized => {
            normalized = normalize_trajectory(&traj)?.0;
            &normalized
        }
    };

    let profiles = if spec.wants(Check::DistanceComparison) || spec.wants(Check::AbarDecay) {
        Some(TrajectoryProfiles::compute(diag)?)
    } else {
        None
    };
    let offset = match &profiles {
        Some(p) => p.offset,
        None => profile(&diag.first().frame, None)?.offset,
    };
    let mut checks = Vec::new();
    if let Some(p) = &profiles {
        if spec.wants(Check::DistanceComparison) {
            let r = distance_comparison_report(p);
            dir.write_report("distance_comparison", &r)?;
            checks.push(bound_outcome(Check::DistanceComparison, &r));
        }
        if spec.wants(Check::AbarDecay) {
            let r = abar_decay_report(p);
            dir.write_report("abar_decay", &r)?;
            checks.push(bound_outcome(Check::AbarDecay, &r));
        }
    }
    if spec.wants(Check::CurvatureBound) {
        let r = curvature_bound_report(diag, &offset)?;
        dir.write_report("curvature_bound", &r)?;
        checks.push(bound_outcome(Check::CurvatureBound, &r));
    }
    let metrics = convergence_metrics(diag, &offset)?;
    if spec.wants(Check::Convergence) {
        dir.write_report("convergence", &metrics)?;
        let mut c = bound_outcome(Check::Convergence, &metrics.l2_bound);
        c.pass = metrics.pass();
        let last = metrics.last();
        let _ = write!(
            c.summary,
            "; identity residual {:.3e}; final sup|k-1| {:.3e}, circle deviation {:.3e}",
            metrics.identity_max_residual, last.sup_dev, last.circle_dev
        );
        checks.push(c);
    }
    if spec.wants(Check::DerivativeDecay) {
        let summary = match derivative_decay(diag) {
            Ok(d) => {
                dir.write_report("derivative_decay", &d)?;
                format!(
                    "fitted rate {:.4} over t in [1, {:.4}]{}",
                    d.fitted_rate,
                    d.fit_window.1,
                    if d.flagged { " (flagged: below 0.5)" } else { "" }
                )
            }
            Err(e) => format!("skipped: {e}"),
        };
        checks.push(CheckOutcome { check: Check::DerivativeDecay, hard: false, pass: true, summary });
    }

    let mut rows = base_series(&traj);
    fill_series(&mut rows, Some(&offset), profiles.as_ref(), Some(&metrics));
    dir.write_snapshots(&traj)?;
    dir.write_series(&rows)?;
    let outcome = RunOutcome {
        dir: spec.out_dir.clone(),
        initial_curve_hash: hash,
        termination: traj.termination.clone(),
        steps: traj.steps,
        snapshots: traj.snapshots.len(),
        checks,
        convex_from: convexity_time(diag),
    };
    dir.write_json("summary.json", &outcome)?;
    Ok(outcome)
}

/// Runs several specs in parallel; each writes its own directory.
pub fn cmd_sweep(specs: &[RunSpec]) -> Vec<Result<RunOutcome>> {
    specs.par_iter().map(cmd_run).collect()
}

/// Copies `base` once per seed, switching a Fourier generator to that seed
/// and the output directory to `<out_dir>/seed_<seed>`.
pub fn sweep_specs(base: &RunSpec, seeds: &[u64]) -> Result<Vec<RunSpec>> {
    seeds
        .iter()
        .map(|&seed| {
            let mut s = base.clone();
            s.seed = seed;
            match &mut s.source {
                CurveSource::Generator(GeneratorSpec::Fourier { seed: g, .. }) => *g = seed,
                _ => return Err(Error::ConfigError("a seed sweep needs the fourier generator".into())),
            }
            s.out_dir = base.out_dir.join(format!("seed_{seed}"));
            Ok(s)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityOptions {
    pub grid_x: usize,
    pub grid_t: usize,
    /// Adds `ε·x` to f; a correct suite must then fail.
    pub perturb: f64,
}

impl Default for IdentityOptions {
    fn default() -> Self {
        IdentityOptions { grid_x: 400, grid_t: 101, perturb: 0.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentitySuite {
    pub reports: Vec<IdentityReport>,
}

impl IdentitySuite {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn find(&self, name: &str) -> Option<&IdentityReport> {
        self.reports.iter().find(|r| r.name == name)
    }

    pub fn table(&self) -> String {
        let mut s = format!("{:<44} {:>6} {:>13} {:>13} {:>10}  grid\n", "identity", "pass", "residual", "violation", "tol");
        for r in &self.reports {
            let _ = writeln!(
                s,
                "{:<44} {:>6} {:>13.4e} {:>13.4e} {:>10.1e}  {}",
                r.name,
                if r.pass { "ok" } else { "FAIL" },
                r.max_residual,
                r.max_violation,
                r.tolerance,
                r.grid
            );
        }
        s
    }
}

pub fn cmd_verify_identities(opts: &IdentityOptions) -> Result<IdentitySuite> {
    if opts.grid_x < 2 || opts.grid_t < 2 {
        return Err(Error::ConfigError("identity grids need at least 2 points per axis".into()));
    }
    let func = ComparisonFn::perturbed(opts.perturb);
    let full = Grid::full(opts.grid_x, opts.grid_t);
    let half = Grid::half(opts.grid_x, opts.grid_t);
    let mut reports = vec![check_ltilde(&func, &full), check_ltilde_fd(&func, &full, 200, 7)];
    reports.extend(check_l_dominates(&func, &half));
    reports.extend(check_f_shape(&func, &full));
    reports.push(check_subadditive(&func, 200, 0.0));
    reports.push(check_g_positive());
    reports.push(check_h_convexity(10_001));
    let taylor_cases = [(Ellipse { a: 1.0, b: 1.0 }, 0.3), (Ellipse { a: 2.0, b: 1.0 }, 0.0), (Ellipse { a: 3.0, b: 1.0 }, 0.0)];
    for (curve, theta) in taylor_cases {
        // arcs from 0.064 down to 1e−3
        reports.extend(check_taylor_lemma1(&curve, theta, 1e-3, -6..=0)?.identity_reports());
    }
    Ok(IdentitySuite { reports })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileOutcome {
    pub n: usize,
    pub a_bar: f64,
    pub t_bar: Option<f64>,
    pub round: bool,
    pub argmax: Option<(usize, usize)>,
    pub diagonal_max: f64,
    pub off_diagonal_max: f64,
}

/// Profiles the curve in `input` after canonical scaling and, when `table`
/// is given, writes every off-diagonal pair as `i,j,l,d,a`.
pub fn cmd_profile(input: &Path, table: Option<&Path>) -> Result<ProfileOutcome> {
    let curve = load_curve(input)?;
    profile_curve(&curve, table)
}

pub fn profile_curve(curve: &DiscreteCurve, table: Option<&Path>) -> Result<ProfileOutcome> {
    if !is_embedded(curve) {
        return Err(Error::NotEmbedded);
    }
    let frame = build_frame(&canonical_scale(curve))?;
    let p = profile(&frame, None)?;
    if let Some(path) = table {
        let rows = profile_table(&frame, None)?;
        let mut s = String::with_capacity(32 + rows.len() * 80);
        s.push_str("i,j,l,d,a\n");
        for r in rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                r.chord.i,
                r.chord.j,
                fmt_f64(r.chord.arc),
                fmt_f64(r.chord.chord),
                fmt_f64(r.ratio.a)
            );
        }
        std::fs::write(path, s)?;
    }
    Ok(ProfileOutcome {
        n: frame.len(),
        a_bar: p.a_bar,
        t_bar: (!p.offset.round).then_some(p.offset.t_bar),
        round: p.offset.round,
        argmax: p.argmax.map(|a| (a.i, a.j)),
        diagonal_max: p.diagonal_max,
        off_diagonal_max: p.off_diagonal_max,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub scheme: Scheme,
    pub n: usize,
    pub dt: f64,
    pub steps: usize,
    pub seconds: f64,
    pub steps_per_second: f64,
}

/// Times normalized steps of both schemes on the (2, 1) ellipse.
pub fn cmd_bench(n: usize, steps: usize) -> Result<Vec<BenchRow>> {
    let curve = canonical_scale(&resample_uniform(&GeneratorSpec::Ellipse { a: 2.0, b: 1.0, n }.generate()?, n)?);
    let start = Snapshot::new(0, 0.0, curve)?;
    [Scheme::SemiImplicit, Scheme::Explicit]
        .into_iter()
        .map(|scheme| {
            let dt = match (scheme, FlowConfig::default().dt) {
                (Scheme::Explicit, _) => crate::dynamics::explicit_dt_limit(&start.frame),
                (_, DtPolicy::Fixed { dt }) => dt,
                (_, DtPolicy::Adaptive { cap, .. }) => cap,
            };
            let clock = Instant::now();
            let mut s = start.clone();
            for _ in 0..steps {
                s = step_normalized(&s, dt, scheme)?;
            }
            let seconds = clock.elapsed().as_secs_f64();
            Ok(BenchRow { scheme, n, dt, steps, seconds, steps_per_second: steps as f64 / seconds })
        })
        .collect()
}
