use serde::Serialize;

use super::{CurveFrame, Vec2};
use crate::{Error, Result};

/// Chord and arc between two vertices of a frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChordArc {
    pub i: usize,
    pub j: usize,
    /// Euclidean distance |F_j − F_i|.
    pub chord: f64,
    /// The shorter of the two polygon arcs between the vertices.
    pub arc: f64,
    /// Unit chord direction (F_j − F_i) / d.
    pub direction: Vec2,
    /// Angle between T_i and T_j, in [0, π].
    pub opening_angle: f64,
    /// Angle between T_i and w, in [0, π].
    pub angle_at_i: f64,
    /// Angle between T_j and w, in [0, π].
    pub angle_at_j: f64,
}

#[inline]
fn angle_between(a: Vec2, b: Vec2) -> f64 {
    a.cross(b).abs().atan2(a.dot(b))
}

/// Shorter polygon arc between vertices `i` and `j`.
#[inline]
pub fn shorter_arc(frame: &CurveFrame, i: usize, j: usize) -> f64 {
    let raw = (frame.arclength[j] - frame.arclength[i]).abs();
    raw.min(frame.length - raw)
}

pub fn chord_arc(frame: &CurveFrame, i: usize, j: usize) -> Result<ChordArc> {
    let n = frame.len();
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidPair(i, j));
    }
    let delta = frame.positions[j] - frame.positions[i];
    let chord = delta.norm();
    let direction = delta * (1.0 / chord);
    let (ti, tj) = (frame.tangents[i], frame.tangents[j]);
    Ok(ChordArc {
        i,
        j,
        chord,
        arc: shorter_arc(frame, i, j),
        direction,
        opening_angle: angle_between(ti, tj),
        angle_at_i: angle_between(ti, direction),
        angle_at_j: angle_between(tj, direction),
    })
}
