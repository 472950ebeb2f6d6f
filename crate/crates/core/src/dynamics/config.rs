use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Forward Euler on `−kν` (plus the dilation term), with
    /// `dt ≤ 0.25·(min edge)²`.
    Explicit,
    /// Backward Euler on the second-difference operator with frozen
    /// coefficients.
    SemiImplicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum DtPolicy {
    Fixed { dt: f64 },
    /// `dt = min(cap, c / k_max²)`.
    Adaptive { c: f64, cap: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunKind {
    /// ∂F/∂t = ⟨k²⟩F − kν at length 2π; time stamps are t.
    Normalized,
    /// ∂F̃/∂τ = −k̃ν̃; time stamps are τ.
    Unnormalized,
}

impl RunKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunKind::Normalized => "normalized",
            RunKind::Unnormalized => "unnormalized",
        }
    }
}

/// Safety factor for the explicit scheme: `dt ≤ 0.25·(min edge)²`.
pub const EXPLICIT_SAFETY: f64 = 0.25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub kind: RunKind,
    /// Vertex count maintained by resampling.
    pub n: usize,
    pub scheme: Scheme,
    pub dt: DtPolicy,
    /// End time: t for normalized runs, τ for un-normalized ones.
    pub t_end: f64,
    pub resample_every: usize,
    pub snapshot_every: usize,
    pub embed_check_every: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            kind: RunKind::Normalized,
            n: 512,
            scheme: Scheme::SemiImplicit,
            dt: DtPolicy::Fixed { dt: 1e-3 },
            t_end: 6.0,
            resample_every: 20,
            snapshot_every: 10,
            embed_check_every: 10,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigError(m));
        if self.n < crate::geometry::MIN_VERTICES {
            return bad(format!("n = {} is below {}", self.n, crate::geometry::MIN_VERTICES));
        }
        match self.dt {
            DtPolicy::Fixed { dt } if !(dt > 0.0 && dt.is_finite()) => return bad(format!("dt = {dt}")),
            DtPolicy::Adaptive { c, cap } => {
                if !(c > 0.0 && c <= 0.5) {
                    return bad(format!("safety factor c = {c} outside (0, 0.5]"));
                }
                if !(cap > 0.0 && cap.is_finite()) {
                    return bad(format!("dt cap = {cap}"));
                }
            }
            _ => {}
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end = {}", self.t_end));
        }
        if self.resample_every == 0 || self.snapshot_every == 0 || self.embed_check_every == 0 {
            return bad("cadences must be at least 1".into());
        }
        Ok(())
    }
}
