//! The chord ratio `a(p, q)`: the smallest `a` with `d ≥ f(ℓ, −log a)`.

use serde::Serialize;

use super::func::{f_all_dt, f_raw};
use crate::{Error, Result};
use std::f64::consts::PI;

/// |log a| never exceeds this; larger values are reported as saturated.
pub const LOG_RATIO_CAP: f64 = 700.0;

/// Relative tolerance of the root solve on `a`.
pub const RATIO_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RatioKind {
    /// d ≥ 2 sin(ℓ/2): the chord is at least the round-circle chord.
    Zero,
    Interior,
    /// log a reached [`LOG_RATIO_CAP`].
    Saturated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChordRatio {
    pub a: f64,
    /// log a; −∞ for [`RatioKind::Zero`].
    pub log_a: f64,
    pub kind: RatioKind,
}

impl ChordRatio {
    pub const ZERO: ChordRatio = ChordRatio { a: 0.0, log_a: f64::NEG_INFINITY, kind: RatioKind::Zero };

    fn from_log(log_a: f64) -> Self {
        ChordRatio { a: log_a.exp(), log_a, kind: RatioKind::Interior }
    }
}

/// Diagonal extension `a(p, p) = √(max(k² − 1, 0) / 2)`.
pub fn a_diagonal(k: f64) -> f64 {
    ((k * k - 1.0).max(0.0) / 2.0).sqrt()
}

fn check_domain(d: f64, l: f64) -> Result<()> {
    if !(l > 0.0) || l > PI * (1.0 + 1e-12) {
        return Err(Error::DomainError(format!("a: arc {l}")));
    }
    if !(d > 0.0) || d > l * (1.0 + 1e-9) {
        return Err(Error::DomainError(format!("a: chord {d} for arc {l}")));
    }
    Ok(())
}

/// Solves `d = f(ℓ, −log a)` for `a`.
///
/// Returns `a = 0` when `d ≥ 2 sin(ℓ/2)`. Otherwise bisects on `u = log a`
/// over `[−700, 700]` (where `f(ℓ, −u)` is strictly decreasing) down to a
/// bracket of width 1e−3, then polishes with Newton steps using the closed
/// form of ∂f/∂t, falling back to bisection whenever a Newton iterate
/// leaves the bracket.
pub fn a_solve(d: f64, l: f64) -> Result<ChordRatio> {
    check_domain(d, l)?;
    Ok(solve_unchecked(d, l))
}

pub(crate) fn solve_unchecked(d: f64, l: f64) -> ChordRatio {
    let round_chord = 2.0 * (0.5 * l).sin();
    if d >= round_chord {
        return ChordRatio::ZERO;
    }
    let residual = |u: f64| f_raw(l, -u) - d;
    if residual(LOG_RATIO_CAP) >= 0.0 {
        return ChordRatio { a: LOG_RATIO_CAP.exp(), log_a: LOG_RATIO_CAP, kind: RatioKind::Saturated };
    }
    // residual(lo) > 0 > residual(hi)
    let (mut lo, mut hi) = (-LOG_RATIO_CAP, LOG_RATIO_CAP);
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut u = 0.5 * (lo + hi);
    for _ in 0..100 {
        let r = residual(u);
        if r == 0.0 {
            break;
        }
        if r > 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        // d/du f(ℓ, −u) = −∂f/∂t(ℓ, −u)
        let slope = -f_all_dt(l, -u);
        let mut next = if slope != 0.0 { u - r / slope } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - u).abs();
        u = next;
        if step <= RATIO_RTOL || hi - lo <= RATIO_RTOL * 1e-3 {
            break;
        }
    }
    ChordRatio::from_log(u)
}

/// True iff `a(d, ℓ) > a*` where `log_a_star = log a*`, without solving.
#[inline]
pub(crate) fn ratio_exceeds(d: f64, l: f64, log_a_star: f64) -> bool {
    if log_a_star == f64::NEG_INFINITY {
        return d < 2.0 * (0.5 * l).sin();
    }
    d < f_raw(l, -log_a_star)
}
