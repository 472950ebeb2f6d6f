use rayon::prelude::*;

use super::{DiscreteCurve, Vec2};

#[derive(Clone, Copy)]
struct Segment {
    a: Vec2,
    b: Vec2,
    lo: Vec2,
    hi: Vec2,
}

impl Segment {
    fn new(a: Vec2, b: Vec2) -> Self {
        Segment {
            a,
            b,
            lo: Vec2::new(a.x.min(b.x), a.y.min(b.y)),
            hi: Vec2::new(a.x.max(b.x), a.y.max(b.y)),
        }
    }

    #[inline]
    fn boxes_overlap(&self, o: &Segment, tol: f64) -> bool {
        self.lo.x <= o.hi.x + tol
            && o.lo.x <= self.hi.x + tol
            && self.lo.y <= o.hi.y + tol
            && o.lo.y <= self.hi.y + tol
    }
}

fn point_segment_distance(p: Vec2, s: &Segment) -> f64 {
    let d = s.b - s.a;
    let t = ((p - s.a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
    (p - (s.a + d * t)).norm()
}

/// True when the closed segments come within `tol` of each other.
fn segments_touch(s: &Segment, o: &Segment, tol: f64) -> bool {
    let d1 = (s.b - s.a).cross(o.a - s.a);
    let d2 = (s.b - s.a).cross(o.b - s.a);
    let d3 = (o.b - o.a).cross(s.a - o.a);
    let d4 = (o.b - o.a).cross(s.b - o.a);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let dist = point_segment_distance(s.a, o)
        .min(point_segment_distance(s.b, o))
        .min(point_segment_distance(o.a, s))
        .min(point_segment_distance(o.b, s));
    dist <= tol
}

/// Index of the first pair of non-adjacent edges that touch, if any.
pub fn first_intersection(curve: &DiscreteCurve) -> Option<(usize, usize)> {
    let p = curve.vertices();
    let n = p.len();
    let segs: Vec<Segment> = (0..n).map(|i| Segment::new(p[i], p[(i + 1) % n])).collect();
    let tol = 1e-12 * curve.perimeter() / n as f64;
    (0..n)
        .into_par_iter()
        .filter_map(|i| {
            // edge i is adjacent to i ± 1; edge 0 is adjacent to n − 1
            let last = if i == 0 { n - 1 } else { n };
            (i + 2..last)
                .find(|&j| segs[i].boxes_overlap(&segs[j], tol) && segments_touch(&segs[i], &segs[j], tol))
                .map(|j| (i, j))
        })
        .min()
}

/// True iff no two non-adjacent edges intersect (brute-force pair test with
/// a tolerance of 1e−12 mean edge lengths).
pub fn is_embedded(curve: &DiscreteCurve) -> bool {
    first_intersection(curve).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TWO_PI;

    fn sample(n: usize, f: impl Fn(f64) -> Vec2) -> DiscreteCurve {
        DiscreteCurve::new((0..n).map(|i| f(TWO_PI * i as f64 / n as f64)).collect()).unwrap()
    }

    #[test]
    fn circle_is_embedded() {
        assert!(is_embedded(&sample(256, Vec2::from_angle)));
    }

    #[test]
    fn figure_eight_is_not() {
        // Gerono lemniscate crosses itself at the origin
        let c = sample(201, |t| Vec2::new(t.cos(), t.sin() * t.cos()));
        assert!(!is_embedded(&c));
    }

    #[test]
    fn narrow_dumbbell_is_embedded() {
        // width 0.05 at the neck
        let w = 0.025;
        let c = sample(512, |u| {
            Vec2::new(1.6 * u.cos(), u.sin() * (w + (1.0 - w) * u.cos().powi(2)))
        });
        assert!(is_embedded(&c));
        // brute force over every pair without the bounding-box filter
        let p = c.vertices();
        let n = p.len();
        let tol = 1e-12 * c.perimeter() / n as f64;
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let s = Segment::new(p[i], p[(i + 1) % n]);
                let o = Segment::new(p[j], p[(j + 1) % n]);
                assert!(!segments_touch(&s, &o, tol), "{i} {j}");
            }
        }
    }

    #[test]
    fn touching_vertex_counts_as_intersection() {
        // a polygon that revisits an earlier vertex position
        let pts = [
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 2.0],
            [1.0, 2.0],
            [1.0, 0.0],
            [1.0, -1.0],
            [-1.0, -1.0],
            [-1.0, 0.5],
        ];
        let c = DiscreteCurve::from_xy(&pts).unwrap();
        assert!(!is_embedded(&c));
    }
}
