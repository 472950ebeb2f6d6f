//! Run orchestration: stepping, resampling, embeddedness checks and
//! snapshot recording.

use serde::Serialize;

use super::config::{DtPolicy, FlowConfig, RunKind, Scheme};
use super::stepper::{advance_normalized, advance_unnormalized, explicit_dt_limit, Snapshot};
use crate::geometry::{canonical_scale, is_embedded, resample_unchecked, DiscreteCurve};
use crate::{Error, Result};

/// Steps below this size mean the curvature has outrun the time step.
pub const MIN_DT: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Termination {
    ReachedEnd,
    SelfIntersection { step: usize, time: f64 },
    CurvatureBlowup { step: usize, time: f64 },
    StepFailure { step: usize, time: f64, message: String },
}

impl Termination {
    pub fn is_complete(&self) -> bool {
        matches!(self, Termination::ReachedEnd)
    }

    /// The matching error, for runs that did not complete.
    pub fn to_error(&self) -> Option<Error> {
        match self {
            Termination::ReachedEnd => None,
            Termination::SelfIntersection { step, .. } => Some(Error::SelfIntersection { step: *step }),
            Termination::CurvatureBlowup { step, .. } => Some(Error::NumericalBlowup { step: *step }),
            Termination::StepFailure { message, .. } => Some(Error::DomainError(message.clone())),
        }
    }
}

/// Recorded solution family with strictly increasing time stamps.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub kind: RunKind,
    pub snapshots: Vec<Snapshot>,
    pub termination: Termination,
    pub steps: usize,
}

impl Trajectory {
    pub fn first(&self) -> &Snapshot {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory has at least one snapshot")
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time).collect()
    }

    pub fn require(&self, kind: RunKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::WrongRunKind { expected: kind.as_str() })
        }
    }
}

fn step_size(config: &FlowConfig, snap: &Snapshot) -> f64 {
    let mut dt = match config.dt {
        DtPolicy::Fixed { dt } => dt,
        DtPolicy::Adaptive { c, cap } => {
            let k = snap.frame.k_abs_max();
            if k > 0.0 {
                cap.min(c / (k * k))
            } else {
                cap
            }
        }
    };
    if config.scheme == Scheme::Explicit {
        dt = dt.min(explicit_dt_limit(&snap.frame));
    }
    dt
}

fn prepare(config: &FlowConfig, initial: &DiscreteCurve) -> Result<DiscreteCurve> {
    config.validate()?;
    if !is_embedded(initial) {
        return Err(Error::NotEmbedded);
    }
    let mut curve = if initial.len() == config.n { initial.clone() } else { resample_unchecked(initial, config.n)? };
    if !is_embedded(&curve) {
        return Err(Error::ResampleFailure(config.n));
    }
    if config.kind == RunKind::Normalized {
        curve = canonical_scale(&curve);
    }
    Ok(curve)
}

/// Integrates the configured flow from `initial`.
///
/// The initial curve is resampled to `config.n` vertices if needed and, for
/// normalized runs, scaled to length 2π. A non-embedded initial curve is
/// rejected with [`Error::NotEmbedded`]; every failure after the first step
/// ends the run and is recorded in [`Trajectory::termination`].
pub fn run(config: &FlowConfig, initial: &DiscreteCurve) -> Result<Trajectory> {
    let curve = prepare(config, initial)?;
    let mut current = Snapshot::new(0, 0.0, curve)?;
    let mut snapshots = vec![current.clone()];
    let t_end = config.t_end;
    let eps_t = 1e-12 * t_end.max(1.0);
    let termination = loop {
        if current.time >= t_end - eps_t {
            break Termination::ReachedEnd;
        }
        let mut dt = step_size(config, &current);
        if dt < MIN_DT {
            break Termination::CurvatureBlowup { step: current.step, time: current.time };
        }
        let remaining = t_end - current.time;
        let last = dt >= remaining - eps_t;
        if last {
            dt = remaining;
        }
        let advanced = match config.kind {
            RunKind::Normalized => advance_normalized(&current, dt, config.scheme),
            RunKind::Unnormalized => advance_unnormalized(&current, dt, config.scheme),
        };
        let mut next = match advanced {
            Ok(s) => s,
            Err(Error::NumericalBlowup { step }) => {
                break Termination::CurvatureBlowup { step, time: current.time + dt };
            }
            Err(e) => {
                break Termination::StepFailure { step: current.step + 1, time: current.time + dt, message: e.to_string() };
            }
        };
        if last {
            next.time = t_end;
        }
        if next.step % config.resample_every == 0 {
            let resampled = resample_unchecked(&next.curve, config.n).map(|c| match config.kind {
                RunKind::Normalized => canonical_scale(&c),
                RunKind::Unnormalized => c,
            });
            match resampled.and_then(|c| Snapshot::new(next.step, next.time, c)) {
                Ok(s) => next = s,
                Err(e) => {
                    break Termination::StepFailure { step: next.step, time: next.time, message: e.to_string() };
                }
            }
        }
        let check = next.step % config.embed_check_every == 0 || last;
        if check && !is_embedded(&next.curve) {
            break Termination::SelfIntersection { step: next.step, time: next.time };
        }
        if next.step % config.snapshot_every == 0 || last {
            snapshots.push(next.clone());
        }
        current = next;
    };
    Ok(Trajectory { kind: config.kind, steps: current.step, snapshots, termination })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use crate::TWO_PI;

    fn ngon(n: usize, f: impl Fn(f64) -> Vec2) -> DiscreteCurve {
        DiscreteCurve::new((0..n).map(|i| f(TWO_PI * i as f64 / n as f64)).collect()).unwrap()
    }

    #[test]
    fn figure_eight_is_rejected() {
        let c = ngon(64, |t| Vec2::new(t.sin(), (2.0 * t).sin() / 2.0));
        let cfg = FlowConfig { n: 64, ..Default::default() };
        assert!(matches!(run(&cfg, &c), Err(Error::NotEmbedded)));
    }

    #[test]
    fn circle_run_is_stationary() {
        let cfg = FlowConfig { n: 64, t_end: 0.5, ..Default::default() };
        let c = ngon(64, Vec2::from_angle);
        let tr = run(&cfg, &c).unwrap();
        assert!(tr.termination.is_complete());
        assert_eq!(tr.steps, 500);
        assert_eq!(tr.snapshots.len(), 51);
        assert_eq!(tr.last().time, 0.5);
        let p0 = tr.first().curve.vertices();
        for s in &tr.snapshots {
            assert!((s.frame.length - TWO_PI).abs() / TWO_PI < 1e-9);
            for (a, b) in p0.iter().zip(s.curve.vertices()) {
                assert!((*a - *b).norm() < 1e-12);
            }
        }
        let ts = tr.times();
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn run_resamples_to_n() {
        let cfg = FlowConfig { n: 96, t_end: 0.01, ..Default::default() };
        let tr = run(&cfg, &ngon(200, |t| Vec2::new(2.0 * t.cos(), t.sin()))).unwrap();
        assert_eq!(tr.first().curve.len(), 96);
        assert!((tr.first().frame.length - TWO_PI).abs() < 1e-12);
    }

    #[test]
    fn extinction_is_a_blowup() {
        let cfg = FlowConfig {
            kind: RunKind::Unnormalized,
            n: 64,
            scheme: Scheme::SemiImplicit,
            dt: DtPolicy::Adaptive { c: 0.25, cap: 1e-3 },
            t_end: 1.0,
            ..Default::default()
        };
        let tr = run(&cfg, &ngon(64, Vec2::from_angle)).unwrap();
        assert!(!tr.termination.is_complete(), "{:?}", tr.termination);
        // backward Euler overshoots the extinction time by O(dt)
        assert!(tr.last().time < 0.51, "{}", tr.last().time);
    }
}
