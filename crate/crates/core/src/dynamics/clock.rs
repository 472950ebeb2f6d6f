//! The change of variables between the plain flow `F̃(·, τ)` and the
//! normalized flow `F(·, t)`: `F̃ = λF`, `dt/dτ = λ⁻²`, `λ = L̃/2π`.
//!
//! Both directions integrate over the recorded snapshot grid with product
//! rules that are exact on a shrinking circle: for t(τ) the integrand
//! `(2π/L̃)²` is taken as the reciprocal of a function linear in τ on each
//! interval, and for τ(t) the scale `λ = exp(Λ)` is integrated with `Λ`
//! linear in t.

use serde::Serialize;

use super::config::RunKind;
use super::run::{Termination, Trajectory};
use super::stepper::Snapshot;
use crate::{Result, TWO_PI};

/// Sampled clock: un-normalized time τ, normalized time t and the scale λ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClockMap {
    pub tau: Vec<f64>,
    pub t: Vec<f64>,
    pub lambda: Vec<f64>,
    pub l0: f64,
}

/// `ln(1 + x) / x`, continuous at 0.
fn log1p_over(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - 0.5 * x
    } else {
        x.ln_1p() / x
    }
}

/// `(eˣ − 1) / x`, continuous at 0.
fn expm1_over(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 + 0.5 * x
    } else {
        x.exp_m1() / x
    }
}

/// ∫ (2π/L)² dτ over one interval, exact when L² is linear in τ.
fn t_increment(dtau: f64, la: f64, lb: f64) -> f64 {
    let (qa, qb) = (la * la, lb * lb);
    // ∫ dτ / q(τ) with q linear = Δτ·ln(qb/qa)/(qb − qa)
    TWO_PI * TWO_PI * dtau / qa * log1p_over(qb / qa - 1.0)
}

/// ∫ exp(2Λ) dt over one interval, exact when Λ is linear in t.
fn tau_increment(dt: f64, big_la: f64, big_lb: f64) -> f64 {
    dt * (2.0 * big_la).exp() * expm1_over(2.0 * (big_lb - big_la))
}

fn rescaled(s: &Snapshot, time: f64, factor: f64) -> Result<Snapshot> {
    Snapshot::new(s.step, time, s.curve.scaled(factor))
}

/// Maps an un-normalized trajectory to the normalized one: each snapshot
/// is dilated to length 2π about the origin and stamped with
/// `t(τ) = ∫₀^τ (2π/L̃)² dτ′`.
pub fn normalize_trajectory(unnorm: &Trajectory) -> Result<(Trajectory, ClockMap)> {
    unnorm.require(RunKind::Unnormalized)?;
    let l: Vec<f64> = unnorm.snapshots.iter().map(|s| s.frame.length).collect();
    let tau = unnorm.times();
    let mut t = vec![0.0; tau.len()];
    for j in 1..tau.len() {
        t[j] = t[j - 1] + t_increment(tau[j] - tau[j - 1], l[j - 1], l[j]);
    }
    let lambda: Vec<f64> = l.iter().map(|x| x / TWO_PI).collect();
    let snapshots = unnorm
        .snapshots
        .iter()
        .zip(t.iter().zip(&lambda))
        .map(|(s, (&tj, &lam))| rescaled(s, tj, 1.0 / lam))
        .collect::<Result<Vec<_>>>()?;
    let clock = ClockMap { tau, t, lambda, l0: l[0] };
    let traj = Trajectory {
        kind: RunKind::Normalized,
        snapshots,
        termination: unnorm.termination.clone(),
        steps: unnorm.steps,
    };
    Ok((traj, clock))
}

/// Recovers the un-normalized trajectory from a normalized one:
/// `λ(t) = (L₀/2π)·exp(−∫₀ᵗ ⟨k²⟩ dt′)`, `τ(t) = ∫₀ᵗ λ² dt′`, `F̃ = λF`.
pub fn recover_unnormalized(norm: &Trajectory, l0: f64) -> Result<(Trajectory, ClockMap)> {
    norm.require(RunKind::Normalized)?;
    let t = norm.times();
    let mk2: Vec<f64> = norm.snapshots.iter().map(|s| s.frame.mean_k2).collect();
    // Λ = log λ by the trapezoid rule on ⟨k²⟩
    let mut big_l = vec![(l0 / TWO_PI).ln(); t.len()];
    for j in 1..t.len() {
        big_l[j] = big_l[j - 1] - 0.5 * (t[j] - t[j - 1]) * (mk2[j - 1] + mk2[j]);
    }
    let mut tau = vec![0.0; t.len()];
    for j in 1..t.len() {
        tau[j] = tau[j - 1] + tau_increment(t[j] - t[j - 1], big_l[j - 1], big_l[j]);
    }
    let lambda: Vec<f64> = big_l.iter().map(|x| x.exp()).collect();
    let snapshots = norm
        .snapshots
        .iter()
        .zip(tau.iter().zip(&lambda))
        .map(|(s, (&tj, &lam))| rescaled(s, tj, lam))
        .collect::<Result<Vec<_>>>()?;
    let clock = ClockMap { tau, t, lambda, l0 };
    let traj = Trajectory {
        kind: RunKind::Unnormalized,
        snapshots,
        termination: norm.termination.clone(),
        steps: norm.steps,
    };
    Ok((traj, clock))
}

/// The exact shrinking circle `R(τ) = √(R₀² − 2τ)` sampled at `taus`, as
/// a polygon whose perimeter (not circumradius) follows the formula.
pub fn shrinking_circle_trajectory(r0: f64, n: usize, taus: &[f64]) -> Result<Trajectory> {
    use crate::geometry::{DiscreteCurve, Vec2};
    // perimeter of the unit-circumradius n-gon
    let sigma = n as f64 * 2.0 * (std::f64::consts::PI / n as f64).sin() / TWO_PI;
    let snapshots = taus
        .iter()
        .enumerate()
        .map(|(j, &tau)| {
            let r = (r0 * r0 - 2.0 * tau).sqrt() / sigma;
            let v = (0..n).map(|i| Vec2::from_angle(TWO_PI * i as f64 / n as f64) * r).collect();
            Snapshot::new(j, tau, DiscreteCurve::new(v)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        kind: RunKind::Unnormalized,
        steps: taus.len().saturating_sub(1),
        snapshots,
        termination: Termination::ReachedEnd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(end: f64, step: f64) -> Vec<f64> {
        let m = (end / step).round() as usize;
        (0..=m).map(|j| j as f64 * step).collect()
    }

    #[test]
    fn circle_time_map_is_exact() {
        let taus = grid(0.45, 0.005);
        let tr = shrinking_circle_trajectory(1.0, 128, &taus).unwrap();
        let (n, clock) = normalize_trajectory(&tr).unwrap();
        assert_eq!(clock.t[0], 0.0);
        for (tau, t) in clock.tau.iter().zip(&clock.t) {
            assert!((t + 0.5 * (1.0 - 2.0 * tau).ln()).abs() < 1e-12, "{tau} {t}");
        }
        let j = taus.iter().position(|&x| (x - 0.375).abs() < 1e-12).unwrap();
        assert!((clock.t[j] - 2f64.ln()).abs() < 1e-12);
        assert!(n.times().windows(2).all(|w| w[1] > w[0]));
        for s in &n.snapshots {
            assert!((s.frame.length - TWO_PI).abs() < 1e-12);
        }
    }

    #[test]
    fn recovery_of_normalized_circle() {
        let taus = grid(0.45, 0.01);
        let tr = shrinking_circle_trajectory(1.0, 128, &taus).unwrap();
        let (n, _) = normalize_trajectory(&tr).unwrap();
        let (u, clock) = recover_unnormalized(&n, TWO_PI).unwrap();
        assert_eq!(clock.tau[0], 0.0);
        assert_eq!(clock.lambda[0], 1.0);
        for (j, s) in u.snapshots.iter().enumerate() {
            let t = clock.t[j];
            // the regular polygon at length 2π has ⟨k²⟩ = 1 exactly
            assert!((clock.lambda[j] - (-t).exp()).abs() < 1e-12);
            assert!((clock.tau[j] - 0.5 * (1.0 - (-2.0 * t).exp())).abs() < 1e-12);
            for (a, b) in s.curve.vertices().iter().zip(tr.snapshots[j].curve.vertices()) {
                assert!((*a - *b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn wrong_kinds_are_rejected() {
        let tr = shrinking_circle_trajectory(1.0, 16, &[0.0, 0.1]).unwrap();
        assert!(recover_unnormalized(&tr, 1.0).is_err());
        let (n, _) = normalize_trajectory(&tr).unwrap();
        assert!(normalize_trajectory(&n).is_err());
    }

    #[test]
    fn increments_are_positive_and_consistent() {
        assert!((t_increment(0.1, 2.0, 2.0) - TWO_PI * TWO_PI * 0.1 / 4.0).abs() < 1e-14);
        assert!((tau_increment(0.1, 0.3, 0.3) - 0.1 * 0.6f64.exp()).abs() < 1e-14);
        assert!(t_increment(1e-3, 1.0, 0.5) > 0.0);
    }
}
