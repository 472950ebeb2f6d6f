//! Chord-ratio profiles of a whole curve: ā, t̄ and the functional Z.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::func::f_raw;
use super::ratio::{a_diagonal, ratio_exceeds, solve_unchecked, ChordRatio};
use crate::geometry::{chord_arc, shorter_arc, ChordArc, CurveFrame};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Multiple of `ε·(R/h)²` below which k² − 1 counts as rounding noise.
///
/// A turning angle of size `h/R` built from coordinates of size `R`
/// carries an absolute error near `ε·R/h`, so its relative error, and that
/// of k², is of order `ε·(R/h)²`.
pub const DIAGONAL_ROUNDOFF: f64 = 64.0;

/// Threshold on k² − 1 under which a diagonal value is treated as zero.
pub fn diagonal_roundoff(frame: &CurveFrame) -> f64 {
    let r = frame.positions.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let h = frame.min_edge();
    DIAGONAL_ROUNDOFF * f64::EPSILON * (r / h).powi(2)
}

/// The time offset t̄ = log ā of the distance comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonOffset {
    pub t_bar: f64,
    /// ā = 0: the bound degenerates to d ≥ 2 sin(ℓ/2).
    pub round: bool,
}

impl ComparisonOffset {
    pub const ROUND: ComparisonOffset = ComparisonOffset { t_bar: f64::NEG_INFINITY, round: true };

    pub fn from_abar(a_bar: f64) -> Self {
        if a_bar > 0.0 {
            ComparisonOffset { t_bar: a_bar.ln(), round: false }
        } else {
            Self::ROUND
        }
    }

    pub fn a_bar(&self) -> f64 {
        if self.round {
            0.0
        } else {
            self.t_bar.exp()
        }
    }

    /// The comparison value f(ℓ, t − t̄), or 2 sin(ℓ/2) in the round case.
    #[inline]
    pub fn barrier(&self, l: f64, t: f64) -> f64 {
        if self.round {
            2.0 * (0.5 * l).sin()
        } else {
            f_raw(l, t - self.t_bar)
        }
    }
}

/// Z = d − f(ℓ, t − t̄), or d − 2 sin(ℓ/2) when ā = 0.
pub fn z_eval(d: f64, l: f64, t: f64, offset: &ComparisonOffset) -> Result<f64> {
    if !(l > 0.0) || l > PI * (1.0 + 1e-12) {
        return Err(Error::DomainError(format!("Z: arc {l}")));
    }
    Ok(d - offset.barrier(l, t))
}

/// A vertex pair; `i == j` denotes the diagonal value at vertex `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairIndex {
    pub i: usize,
    pub j: usize,
}

impl PairIndex {
    pub fn is_diagonal(&self) -> bool {
        self.i == self.j
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MinZ {
    pub value: f64,
    pub pair: PairIndex,
    pub chord: f64,
    pub arc: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileSummary {
    /// sup of a over all pairs, diagonal included.
    pub a_bar: f64,
    pub offset: ComparisonOffset,
    /// Where ā is attained (first in index order on ties).
    pub argmax: Option<PairIndex>,
    pub diagonal_max: f64,
    pub off_diagonal_max: f64,
    /// min Z over off-diagonal pairs for the supplied offset and time.
    pub min_z: Option<MinZ>,
}

/// One vertex pair with its ratio and comparison value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChordArcRecord {
    pub chord: ChordArc,
    pub ratio: ChordRatio,
    pub z: Option<f64>,
}

fn diagonal_values(frame: &CurveFrame) -> (f64, Option<usize>) {
    let floor = diagonal_roundoff(frame);
    let mut best = 0.0;
    let mut arg = None;
    for (i, &k) in frame.curvature.iter().enumerate() {
        if k * k - 1.0 <= floor {
            continue;
        }
        let a = a_diagonal(k);
        if a > best {
            best = a;
            arg = Some(i);
        }
    }
    (best, arg)
}

#[inline]
fn pair_geometry(frame: &CurveFrame, i: usize, j: usize) -> (f64, f64) {
    let d = (frame.positions[j] - frame.positions[i]).norm();
    (d, shorter_arc(frame, i, j).min(PI))
}

/// Largest off-diagonal ratio in row `i` that exceeds `floor_log`.
fn row_max(frame: &CurveFrame, i: usize, floor_log: f64) -> Option<(ChordRatio, usize)> {
    let n = frame.len();
    let mut best_log = floor_log;
    let mut best = None;
    for j in i + 1..n {
        let (d, l) = pair_geometry(frame, i, j);
        if ratio_exceeds(d, l, best_log) {
            let r = solve_unchecked(d, l);
            if r.log_a > best_log {
                best_log = r.log_a;
                best = Some((r, j));
            }
        }
    }
    best
}

/// Minimum of Z over all off-diagonal pairs at time `t`.
pub fn min_z(frame: &CurveFrame, t: f64, offset: &ComparisonOffset) -> Option<MinZ> {
    let n = frame.len();
    let rows: Vec<Option<MinZ>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: Option<MinZ> = None;
            for j in i + 1..n {
                let (d, l) = pair_geometry(frame, i, j);
                let z = d - offset.barrier(l, t);
                if best.is_none_or(|b| z < b.value) {
                    best = Some(MinZ { value: z, pair: PairIndex { i, j }, chord: d, arc: l });
                }
            }
            best
        })
        .collect();
    rows.into_iter().flatten().fold(None, |acc: Option<MinZ>, r| match acc {
        Some(a) if a.value <= r.value => Some(a),
        _ => Some(r),
    })
}

/// Computes ā over all pairs and the diagonal; optionally min Z at
/// `(t, offset)`.
///
/// Rows are scanned in parallel; a pair is only root-solved when its chord
/// beats the barrier of the best ratio found so far in its row, so the
/// result equals the exhaustive maximum.
pub fn profile(frame: &CurveFrame, z_at: Option<(f64, &ComparisonOffset)>) -> Result<ProfileSummary> {
    let n = frame.len();
    let (diagonal_max, diag_arg) = diagonal_values(frame);
    let floor_log = if diagonal_max > 0.0 { diagonal_max.ln() } else { f64::NEG_INFINITY };
    let rows: Vec<Option<(ChordRatio, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| row_max(frame, i, f64::NEG_INFINITY.max(floor_log)))
        .collect();
    let mut off_max = ChordRatio::ZERO;
    let mut off_arg = None;
    for (i, r) in rows.into_iter().enumerate() {
        if let Some((ratio, j)) = r {
            if ratio.log_a > off_max.log_a {
                off_max = ratio;
                off_arg = Some(PairIndex { i, j });
            }
        }
    }
    // rows were pruned by the diagonal maximum; recover the true
    // off-diagonal maximum if the diagonal dominated everywhere
    let off_diagonal_max = if off_arg.is_some() {
        off_max.a
    } else {
        off_diagonal_max_exhaustive(frame)
    };
    let (a_bar, argmax) = if off_arg.is_some() && off_max.a > diagonal_max {
        (off_max.a, off_arg)
    } else {
        (diagonal_max, diag_arg.map(|i| PairIndex { i, j: i }))
    };
    let min_z = z_at.and_then(|(t, off)| min_z(frame, t, off));
    Ok(ProfileSummary {
        a_bar,
        offset: ComparisonOffset::from_abar(a_bar),
        argmax,
        diagonal_max,
        off_diagonal_max,
        min_z,
    })
}

fn off_diagonal_max_exhaustive(frame: &CurveFrame) -> f64 {
    let n = frame.len();
    (0..n)
        .into_par_iter()
        .map(|i| row_max(frame, i, f64::NEG_INFINITY).map_or(0.0, |(r, _)| r.a))
        .reduce(|| 0.0, f64::max)
}

/// Every off-diagonal pair `i < j` with its chord, arc, ratio and, when an
/// offset is supplied, Z.
pub fn profile_table(
    frame: &CurveFrame,
    z_at: Option<(f64, &ComparisonOffset)>,
) -> Result<Vec<ChordArcRecord>> {
    let n = frame.len();
    let rows: Vec<Result<Vec<ChordArcRecord>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    let mut chord = chord_arc(frame, i, j)?;
                    chord.arc = chord.arc.min(PI);
                    let ratio = super::ratio::a_solve(chord.chord, chord.arc)?;
                    let z = z_at.map(|(t, off)| chord.chord - off.barrier(chord.arc, t));
                    Ok(ChordArcRecord { chord, ratio, z })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}
