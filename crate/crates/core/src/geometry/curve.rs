use serde::{Deserialize, Serialize};

use super::Vec2;
use crate::{Error, Result, TWO_PI};

/// Smallest admissible vertex count.
pub const MIN_VERTICES: usize = 8;

/// Edges shorter than this fraction of the mean edge length are degenerate.
pub const DEGENERATE_EDGE_RATIO: f64 = 1e-12;

/// A closed polygon; vertex `i` connects to vertex `(i + 1) % n`.
///
/// Construction canonicalises the orientation: a polygon with negative
/// signed area is reversed so that convex curves carry positive curvature
/// and the frame normal points out of the enclosed region. Embeddedness is
/// not enforced here, so that self-intersecting input can still be loaded
/// and rejected by [`is_embedded`](super::is_embedded).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteCurve {
    vertices: Vec<Vec2>,
    /// True when the input was clockwise and had to be reversed.
    #[serde(skip)]
    reversed: bool,
}

impl DiscreteCurve {
    pub fn new(mut vertices: Vec<Vec2>) -> Result<Self> {
        let n = vertices.len();
        if n < MIN_VERTICES {
            return Err(Error::DegenerateCurve(format!(
                "{n} vertices, need at least {MIN_VERTICES}"
            )));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::DegenerateCurve(format!("vertex {i} is not finite")));
        }
        check_edges(&vertices)?;
        let reversed = signed_area_of(&vertices) < 0.0;
        if reversed {
            vertices[1..].reverse();
        }
        Ok(DiscreteCurve { vertices, reversed })
    }

    /// Builds a curve without re-checking edges or orientation. Callers
    /// guarantee the invariants (used on the hot path of the steppers).
    pub(crate) fn from_trusted(vertices: Vec<Vec2>) -> Self {
        DiscreteCurve { vertices, reversed: false }
    }

    pub fn from_xy(points: &[[f64; 2]]) -> Result<Self> {
        Self::new(points.iter().map(|&p| Vec2::from(p)).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> Vec2 {
        self.vertices[i % self.vertices.len()]
    }

    pub fn into_vertices(self) -> Vec<Vec2> {
        self.vertices
    }

    pub fn was_reversed(&self) -> bool {
        self.reversed
    }

    /// Shoelace signed area; positive for counterclockwise polygons.
    pub fn signed_area(&self) -> f64 {
        signed_area_of(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| (self.vertices[(i + 1) % n] - self.vertices[i]).norm())
            .sum()
    }

    pub fn centroid(&self) -> Vec2 {
        let n = self.len() as f64;
        let s = self.vertices.iter().fold(Vec2::ZERO, |acc, &v| acc + v);
        s * (1.0 / n)
    }

    /// Uniform dilation about the origin.
    pub fn scaled(&self, factor: f64) -> DiscreteCurve {
        DiscreteCurve {
            vertices: self.vertices.iter().map(|&v| v * factor).collect(),
            reversed: self.reversed,
        }
    }

    pub fn translated(&self, by: Vec2) -> DiscreteCurve {
        DiscreteCurve {
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
            reversed: self.reversed,
        }
    }

    /// Little-endian bytes of all coordinates, used for hashing.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len() * 16);
        for v in &self.vertices {
            out.extend_from_slice(&v.x.to_le_bytes());
            out.extend_from_slice(&v.y.to_le_bytes());
        }
        out
    }
}

impl<'de> Deserialize<'de> for DiscreteCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<Vec2>,
        }
        let raw = Raw::deserialize(d)?;
        DiscreteCurve::new(raw.vertices).map_err(serde::de::Error::custom)
    }
}

fn signed_area_of(v: &[Vec2]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>()
}

fn check_edges(v: &[Vec2]) -> Result<()> {
    let n = v.len();
    let lengths: Vec<f64> = (0..n).map(|i| (v[(i + 1) % n] - v[i]).norm()).collect();
    let mean = lengths.iter().sum::<f64>() / n as f64;
    if !(mean > 0.0) {
        return Err(Error::DegenerateCurve("all vertices coincide".into()));
    }
    if let Some(i) = lengths.iter().position(|&h| h <= DEGENERATE_EDGE_RATIO * mean) {
        return Err(Error::DegenerateCurve(format!(
            "edge {i} has length {:e} (mean {mean:e})",
            lengths[i]
        )));
    }
    Ok(())
}

/// Dilates the curve about the origin so that its perimeter is exactly 2π.
pub fn canonical_scale(curve: &DiscreteCurve) -> DiscreteCurve {
    let l = curve.perimeter();
    let scaled = curve.scaled(TWO_PI / l);
    // one correction pass absorbs the rounding of the first product
    let l2 = scaled.perimeter();
    if l2 != TWO_PI {
        scaled.scaled(TWO_PI / l2)
    } else {
        scaled
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(side: f64, n_per_side: usize) -> DiscreteCurve {
        let mut v = Vec::new();
        let corners = [
            Vec2::new(0.0, 0.0),
            Vec2::new(side, 0.0),
            Vec2::new(side, side),
            Vec2::new(0.0, side),
        ];
        for c in 0..4 {
            let a = corners[c];
            let b = corners[(c + 1) % 4];
            for k in 0..n_per_side {
                v.push(a.lerp(b, k as f64 / n_per_side as f64));
            }
        }
        DiscreteCurve::new(v).unwrap()
    }

    #[test]
    fn rejects_too_few_vertices() {
        let v: Vec<Vec2> = (0..5).map(|i| Vec2::from_angle(i as f64)).collect();
        assert!(matches!(DiscreteCurve::new(v), Err(Error::DegenerateCurve(_))));
    }

    #[test]
    fn rejects_repeated_vertex() {
        let mut v: Vec<Vec2> = (0..10)
            .map(|i| Vec2::from_angle(TWO_PI * i as f64 / 10.0))
            .collect();
        v[4] = v[3];
        assert!(matches!(DiscreteCurve::new(v), Err(Error::DegenerateCurve(_))));
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let v: Vec<Vec2> = (0..16)
            .map(|i| Vec2::from_angle(-TWO_PI * i as f64 / 16.0))
            .collect();
        let c = DiscreteCurve::new(v.clone()).unwrap();
        assert!(c.was_reversed());
        assert!(c.signed_area() > 0.0);
        assert_eq!(c.vertex(0), v[0]);
        assert_eq!(c.vertex(1), v[15]);
    }

    #[test]
    fn square_scales_to_side_half_pi() {
        let sq = square(1.0, 4);
        assert!((sq.perimeter() - 4.0).abs() < 1e-15);
        let c = canonical_scale(&sq);
        assert!((c.perimeter() - TWO_PI).abs() <= 1e-12 * TWO_PI);
        let side = (c.vertex(4) - c.vertex(0)).norm();
        assert!((side - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn circle_radius_three_scales_to_unit_length() {
        let v: Vec<Vec2> = (0..256)
            .map(|i| Vec2::from_angle(TWO_PI * i as f64 / 256.0) * 3.0)
            .collect();
        let c = canonical_scale(&DiscreteCurve::new(v).unwrap());
        assert!((c.perimeter() - TWO_PI).abs() <= 1e-12 * TWO_PI);
        let r = c.vertex(0).norm();
        // perimeter 2π polygon has circumradius π / (n sin(π/n))
        let expect = std::f64::consts::PI / (256.0 * (std::f64::consts::PI / 256.0).sin());
        assert!((r - expect).abs() < 1e-12);
    }

    #[test]
    fn canonical_scale_is_idempotent_on_unit_length() {
        let c = canonical_scale(&square(2.5, 3));
        let again = canonical_scale(&c);
        for (a, b) in c.vertices().iter().zip(again.vertices()) {
            assert!((*a - *b).norm() <= 1e-12);
        }
    }

    #[test]
    fn deserialize_validates() {
        let bad = r#"{"vertices": [[0,0],[1,0],[1,1]]}"#;
        assert!(serde_json::from_str::<DiscreteCurve>(bad).is_err());
    }
}
