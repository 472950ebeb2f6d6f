//! Single time steps of the plain and the length-normalized flow.

use serde::Serialize;

use super::config::{Scheme, EXPLICIT_SAFETY};
use super::tridiag::CyclicTridiag;
use crate::geometry::{build_frame, canonical_scale, is_embedded, CurveFrame, DiscreteCurve, Vec2};
use crate::{Error, Result};

/// A curve at one instant with its frame, rebuilt from the curve.
#[derive(Clone, Debug, Serialize)]
pub struct Snapshot {
    pub step: usize,
    /// t for normalized runs, τ for un-normalized ones.
    pub time: f64,
    pub curve: DiscreteCurve,
    #[serde(skip)]
    pub frame: CurveFrame,
}

impl Snapshot {
    pub fn new(step: usize, time: f64, curve: DiscreteCurve) -> Result<Self> {
        let frame = build_frame(&curve)?;
        Ok(Snapshot { step, time, curve, frame })
    }
}

/// Largest stable explicit step for the current mesh.
pub fn explicit_dt_limit(frame: &CurveFrame) -> f64 {
    EXPLICIT_SAFETY * frame.min_edge().powi(2)
}

/// Coefficients of the three-point second difference on the arclength
/// mesh: `(D F)_i = lower_i (F_{i−1} − F_i) + upper_i (F_{i+1} − F_i)`.
fn second_difference(frame: &CurveFrame) -> (Vec<f64>, Vec<f64>) {
    let n = frame.len();
    let h = &frame.edge_lengths;
    let w = &frame.dual_lengths;
    let lower = (0..n).map(|i| 1.0 / (w[i] * h[(i + n - 1) % n])).collect();
    let upper = (0..n).map(|i| 1.0 / (w[i] * h[i])).collect();
    (lower, upper)
}

/// Solves `(I − dt·D) X = scale·F` for both coordinates.
fn implicit_solve(frame: &CurveFrame, dt: f64, scale: f64) -> Vec<Vec2> {
    let (lo, up) = second_difference(frame);
    let n = frame.len();
    let lower: Vec<f64> = lo.iter().map(|l| -dt * l).collect();
    let upper: Vec<f64> = up.iter().map(|u| -dt * u).collect();
    let diag: Vec<f64> = (0..n).map(|i| 1.0 + dt * (lo[i] + up[i])).collect();
    let system = CyclicTridiag::new(&lower, &diag, &upper);
    let mut xs: Vec<f64> = frame.positions.iter().map(|p| scale * p.x).collect();
    let mut ys: Vec<f64> = frame.positions.iter().map(|p| scale * p.y).collect();
    system.solve_in_place(&mut xs);
    system.solve_in_place(&mut ys);
    xs.into_iter().zip(ys).map(|(x, y)| Vec2::new(x, y)).collect()
}

fn explicit_update(frame: &CurveFrame, dt: f64, dilation: f64) -> Vec<Vec2> {
    frame
        .positions
        .iter()
        .zip(frame.normals.iter().zip(&frame.curvature))
        .map(|(&p, (&nu, &k))| p + (p * dilation - nu * k) * dt)
        .collect()
}

fn finish(vertices: Vec<Vec2>, step: usize) -> Result<DiscreteCurve> {
    if vertices.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalBlowup { step });
    }
    let curve = DiscreteCurve::from_trusted(vertices);
    if !(curve.signed_area() > 0.0) {
        return Err(Error::NumericalBlowup { step });
    }
    Ok(curve)
}

/// Advances ∂F̃/∂τ = −k̃ν̃ by `dt` without an embeddedness check.
pub(crate) fn advance_unnormalized(snap: &Snapshot, dt: f64, scheme: Scheme) -> Result<Snapshot> {
    let step = snap.step + 1;
    let v = match scheme {
        Scheme::Explicit => explicit_update(&snap.frame, dt, 0.0),
        Scheme::SemiImplicit => implicit_solve(&snap.frame, dt, 1.0),
    };
    let curve = finish(v, step)?;
    Snapshot::new(step, snap.time + dt, curve).map_err(|_| Error::NumericalBlowup { step })
}

/// Advances ∂F/∂t = ⟨k²⟩F − kν by `dt` and rescales to length 2π, without
/// an embeddedness check.
pub(crate) fn advance_normalized(snap: &Snapshot, dt: f64, scheme: Scheme) -> Result<Snapshot> {
    let step = snap.step + 1;
    let mk2 = snap.frame.mean_k2;
    let v = match scheme {
        Scheme::Explicit => explicit_update(&snap.frame, dt, mk2),
        Scheme::SemiImplicit => implicit_solve(&snap.frame, dt, 1.0 + dt * mk2),
    };
    let curve = canonical_scale(&finish(v, step)?);
    Snapshot::new(step, snap.time + dt, curve).map_err(|_| Error::NumericalBlowup { step })
}

/// One step of the un-normalized flow, followed by an embeddedness check.
pub fn step_unnormalized(snap: &Snapshot, dt: f64, scheme: Scheme) -> Result<Snapshot> {
    let next = advance_unnormalized(snap, dt, scheme)?;
    if !is_embedded(&next.curve) {
        return Err(Error::SelfIntersection { step: next.step });
    }
    Ok(next)
}

/// One step of the normalized flow (length restored to exactly 2π),
/// followed by an embeddedness check.
pub fn step_normalized(snap: &Snapshot, dt: f64, scheme: Scheme) -> Result<Snapshot> {
    let next = advance_normalized(snap, dt, scheme)?;
    if !is_embedded(&next.curve) {
        return Err(Error::SelfIntersection { step: next.step });
    }
    Ok(next)
}
