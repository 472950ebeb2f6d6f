use serde::Serialize;

use super::{DiscreteCurve, Vec2, DEGENERATE_EDGE_RATIO};
use crate::{Error, Result};

/// Derived geometry of a [`DiscreteCurve`].
///
/// Edge `i` runs from vertex `i` to vertex `i + 1`. Vertex quantities use
/// the dual length `w_i = (h_{i-1} + h_i) / 2` as quadrature weight, so that
/// `Σ w_i = L` and `Σ k_i w_i = Σ φ_i` (the total turning).
#[derive(Clone, Debug, Serialize)]
pub struct CurveFrame {
    pub positions: Vec<Vec2>,
    pub edge_lengths: Vec<f64>,
    /// Arclength of vertex `i` measured from vertex 0.
    pub arclength: Vec<f64>,
    pub length: f64,
    /// Exterior turning angle at each vertex, in (−π, π).
    pub turning: Vec<f64>,
    pub dual_lengths: Vec<f64>,
    pub tangents: Vec<Vec2>,
    /// Outward unit normals (tangent rotated by −π/2).
    pub normals: Vec<Vec2>,
    pub curvature: Vec<f64>,
    /// Mean of k² with respect to arclength.
    pub mean_k2: f64,
}

impl CurveFrame {
    #[inline]
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn total_turning(&self) -> f64 {
        self.turning.iter().sum()
    }

    pub fn k_max(&self) -> f64 {
        self.curvature.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn k_min(&self) -> f64 {
        self.curvature.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest |k|.
    pub fn k_abs_max(&self) -> f64 {
        self.curvature.iter().fold(0.0, |m, k| m.max(k.abs()))
    }

    pub fn min_edge(&self) -> f64 {
        self.edge_lengths.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean_edge(&self) -> f64 {
        self.length / self.len() as f64
    }

    /// ∫ k² ds with dual-length weights.
    pub fn integral_k2(&self) -> f64 {
        self.curvature
            .iter()
            .zip(&self.dual_lengths)
            .map(|(k, w)| k * k * w)
            .sum()
    }

    /// Shoelace area of the underlying polygon.
    pub fn area(&self) -> f64 {
        let n = self.len();
        let p = &self.positions;
        0.5 * (0..n).map(|i| p[i].cross(p[(i + 1) % n])).sum::<f64>()
    }
}

/// Computes the discrete frame.
///
/// Curvature at a vertex is the exterior turning angle divided by the dual
/// length; the tangent is the normalised sum of the unit directions of the
/// two adjacent edges.
pub fn build_frame(curve: &DiscreteCurve) -> Result<CurveFrame> {
    let p = curve.vertices();
    let n = p.len();
    let mut edge_lengths = Vec::with_capacity(n);
    let mut dirs = Vec::with_capacity(n);
    for i in 0..n {
        let e = p[(i + 1) % n] - p[i];
        let h = e.norm();
        edge_lengths.push(h);
        dirs.push(e * (1.0 / h));
    }
    let length: f64 = edge_lengths.iter().sum();
    let mean = length / n as f64;
    if let Some(i) = edge_lengths
        .iter()
        .position(|&h| !(h > DEGENERATE_EDGE_RATIO * mean))
    {
        return Err(Error::DegenerateCurve(format!(
            "edge {i} has length {:e}",
            edge_lengths[i]
        )));
    }

    let mut arclength = Vec::with_capacity(n);
    let mut acc = 0.0;
    for h in &edge_lengths {
        arclength.push(acc);
        acc += h;
    }

    let mut turning = Vec::with_capacity(n);
    let mut dual_lengths = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let (d0, d1) = (dirs[prev], dirs[i]);
        let phi = d0.cross(d1).atan2(d0.dot(d1));
        let w = 0.5 * (edge_lengths[prev] + edge_lengths[i]);
        let sum = d0 + d1;
        // a hairpin (φ = ±π) has no bisector; fall back to the edge normal
        let t = if sum.norm_sq() > 1e-24 { sum.normalize() } else { d1.rot_ccw() };
        turning.push(phi);
        dual_lengths.push(w);
        tangents.push(t);
        normals.push(t.rot_cw());
        curvature.push(phi / w);
    }
    let mean_k2 = curvature
        .iter()
        .zip(&dual_lengths)
        .map(|(k, w)| k * k * w)
        .sum::<f64>()
        / length;

    Ok(CurveFrame {
        positions: p.to_vec(),
        edge_lengths,
        arclength,
        length,
        turning,
        dual_lengths,
        tangents,
        normals,
        curvature,
        mean_k2,
    })
}
