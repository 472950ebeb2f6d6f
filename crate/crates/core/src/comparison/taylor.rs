//! Short-chord expansion on smooth analytic curves: `(ℓ − d)/ℓ³ → k²/24`
//! and the diagonal limit of the chord ratio.

use serde::Serialize;

use super::identities::IdentityReport;
use super::ratio::{a_diagonal, a_solve};
use crate::geometry::Vec2;
use crate::Result;

/// 10-point Gauss–Legendre nodes and weights on [−1, 1].
const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

/// Composite 10-point Gauss–Legendre on panels no wider than `panel`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panel: f64) -> f64 {
    let m = (((b - a).abs() / panel).ceil() as usize).max(1);
    let h = (b - a) / m as f64;
    let mut total = 0.0;
    for p in 0..m {
        let mid = a + h * (p as f64 + 0.5);
        let half = 0.5 * h;
        let mut s = 0.0;
        for (x, w) in GL_NODES.iter().zip(&GL_WEIGHTS) {
            s += w * (f(mid - half * x) + f(mid + half * x));
        }
        total += s * half;
    }
    total
}

/// A smooth closed curve parametrised over [0, 2π).
pub trait AnalyticCurve: Sync {
    fn name(&self) -> String;
    fn position(&self, theta: f64) -> Vec2;
    fn velocity(&self, theta: f64) -> Vec2;
    fn curvature(&self, theta: f64) -> f64;

    /// position(θ2) − position(θ1); implementors avoid cancellation.
    fn chord_vector(&self, theta1: f64, theta2: f64) -> Vec2 {
        self.position(theta2) - self.position(theta1)
    }

    fn speed(&self, theta: f64) -> f64 {
        self.velocity(theta).norm()
    }

    fn arc(&self, theta1: f64, theta2: f64) -> f64 {
        gauss_legendre(|t| self.speed(t), theta1, theta2, 0.05)
    }

    /// ℓ − d computed as ∫ |r′| (1 − T·w) dθ = ∫ |r′| |T − w|²/2 dθ,
    /// which carries no cancellation for short chords.
    fn arc_minus_chord(&self, theta1: f64, theta2: f64) -> f64 {
        let w = self.chord_vector(theta1, theta2).normalize();
        gauss_legendre(
            |t| {
                let v = self.velocity(t);
                let sp = v.norm();
                let dv = v * (1.0 / sp) - w;
                sp * 0.5 * dv.norm_sq()
            },
            theta1,
            theta2,
            0.05,
        )
    }

    fn perimeter(&self) -> f64 {
        self.arc(0.0, crate::TWO_PI)
    }
}

/// Axis-aligned ellipse with semi-axes `a` (x) and `b` (y).
#[derive(Clone, Copy, Debug)]
pub struct Ellipse {
    pub a: f64,
    pub b: f64,
}

impl AnalyticCurve for Ellipse {
    fn name(&self) -> String {
        format!("ellipse({}, {})", self.a, self.b)
    }

    fn position(&self, t: f64) -> Vec2 {
        Vec2::new(self.a * t.cos(), self.b * t.sin())
    }

    fn velocity(&self, t: f64) -> Vec2 {
        Vec2::new(-self.a * t.sin(), self.b * t.cos())
    }

    fn curvature(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        self.a * self.b / (self.a * self.a * s * s + self.b * self.b * c * c).powf(1.5)
    }

    fn chord_vector(&self, t1: f64, t2: f64) -> Vec2 {
        let half = 0.5 * (t2 - t1);
        let mid = 0.5 * (t1 + t2);
        let sh = half.sin();
        Vec2::new(-2.0 * self.a * mid.sin() * sh, 2.0 * self.b * mid.cos() * sh)
    }
}

/// One refinement level of the short-chord check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TaylorLevel {
    pub target_arc: f64,
    pub arc: f64,
    pub chord: f64,
    /// (ℓ − d) / ℓ³
    pub defect: f64,
    /// a_solve(d, ℓ)
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaylorReport {
    pub curve: String,
    pub theta: f64,
    pub curvature: f64,
    pub levels: Vec<TaylorLevel>,
    /// Least-squares slope of log |defect − k²/24| against log ℓ.
    pub defect_order: f64,
    pub defect_error: f64,
    pub ratio_limit: f64,
    pub ratio_error: f64,
}

/// Required observed order of the defect convergence.
pub const MIN_DEFECT_ORDER: f64 = 1.0;
/// |a(s, s + ε) − a(s, s)| at the finest level.
pub const RATIO_LIMIT_TOL: f64 = 1e-2;

impl TaylorReport {
    pub fn pass(&self) -> bool {
        self.defect_order >= MIN_DEFECT_ORDER && self.ratio_error < RATIO_LIMIT_TOL
    }

    pub fn identity_reports(&self) -> Vec<IdentityReport> {
        let grid = format!(
            "{} at theta={:.4} (k={:.6}), eps = {:.3e}..{:.3e}",
            self.curve,
            self.theta,
            self.curvature,
            self.levels.first().map_or(f64::NAN, |l| l.target_arc),
            self.levels.last().map_or(f64::NAN, |l| l.target_arc),
        );
        vec![
            IdentityReport {
                name: "(l - d)/l^3 -> k^2/24, observed order".into(),
                grid: grid.clone(),
                max_residual: self.defect_order,
                max_violation: (MIN_DEFECT_ORDER - self.defect_order).max(0.0),
                tolerance: MIN_DEFECT_ORDER,
                pass: self.defect_order >= MIN_DEFECT_ORDER,
            },
            IdentityReport {
                name: "a(s, s+eps) -> a(s, s)".into(),
                grid,
                max_residual: self.ratio_error,
                max_violation: (self.ratio_error - RATIO_LIMIT_TOL).max(0.0),
                tolerance: RATIO_LIMIT_TOL,
                pass: self.ratio_error < RATIO_LIMIT_TOL,
            },
        ]
    }
}

/// Parameter θ2 > θ1 at which the arc from θ1 equals `arc`.
pub(crate) fn theta_at_arc<C: AnalyticCurve + ?Sized>(curve: &C, theta1: f64, arc: f64) -> f64 {
    let mut th = theta1 + arc / curve.speed(theta1);
    for _ in 0..50 {
        let err = curve.arc(theta1, th) - arc;
        let step = err / curve.speed(th);
        th -= step;
        if step.abs() < 1e-16 * th.abs().max(1.0) {
            break;
        }
    }
    th
}

/// Evaluates the short-chord expansion at parameter `theta` for arcs
/// `scale · 2^-j`, `j ∈ levels`.
pub fn check_taylor_lemma1<C: AnalyticCurve + ?Sized>(
    curve: &C,
    theta: f64,
    scale: f64,
    levels: std::ops::RangeInclusive<i32>,
) -> Result<TaylorReport> {
    let k = curve.curvature(theta);
    let target = k * k / 24.0;
    let mut out = Vec::new();
    for j in levels {
        let eps = scale * 2f64.powi(-j);
        let th2 = theta_at_arc(curve, theta, eps);
        let arc = curve.arc(theta, th2);
        let defect_abs = curve.arc_minus_chord(theta, th2);
        let chord = arc - defect_abs;
        let ratio = a_solve(chord, arc)?.a;
        out.push(TaylorLevel { target_arc: eps, arc, chord, defect: defect_abs / arc.powi(3), ratio });
    }
    let pts: Vec<(f64, f64)> = out
        .iter()
        .map(|l| (l.arc.ln(), (l.defect - target).abs()))
        .filter(|(_, e)| *e > 0.0)
        .map(|(x, e)| (x, e.ln()))
        .collect();
    let defect_order = slope(&pts);
    let last = out.last().copied();
    let ratio_limit = a_diagonal(k);
    Ok(TaylorReport {
        curve: curve.name(),
        theta,
        curvature: k,
        defect_error: last.map_or(f64::NAN, |l| (l.defect - target).abs()),
        ratio_error: last.map_or(f64::NAN, |l| (l.ratio - ratio_limit).abs()),
        ratio_limit,
        defect_order,
        levels: out,
    })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    /// Ellipse perimeter by the arithmetic–geometric mean, independent of
    /// the quadrature above.
    fn agm_perimeter(a: f64, b: f64) -> f64 {
        let (mut x, mut y) = (a, b);
        let mut sum = 0.5 * (a * a - b * b);
        let mut pow = 0.5;
        for _ in 0..30 {
            let (nx, ny) = (0.5 * (x + y), (x * y).sqrt());
            pow *= 2.0;
            sum += pow * 0.25 * (x - y) * (x - y);
            x = nx;
            y = ny;
        }
        2.0 * std::f64::consts::PI * (a * a - sum) / x
    }

    #[test]
    fn quadrature_perimeter_matches_agm() {
        let e = Ellipse { a: 2.0, b: 1.0 };
        let p = e.perimeter();
        assert!((p - agm_perimeter(2.0, 1.0)).abs() < 1e-12, "{p}");
        assert!((p - 9.688_448_220_547_676).abs() < 1e-12);
        // half perimeter between the ends of the minor axis
        assert!((e.arc(FRAC_PI_2, 3.0 * FRAC_PI_2) - 4.844_224_110_273_838).abs() < 1e-12);
    }

    #[test]
    fn circle_defect_limit() {
        let c = Ellipse { a: 1.0, b: 1.0 };
        let r = check_taylor_lemma1(&c, 0.3, 1.0, 3..=10).unwrap();
        assert!((r.levels.last().unwrap().defect - 1.0 / 24.0).abs() < 1e-8);
        assert!(r.defect_order >= 1.0, "{}", r.defect_order);
        assert_eq!(r.ratio_limit, 0.0);
        assert!(r.pass());
    }

    #[test]
    fn ellipse_tip_ratio_limit() {
        let e = Ellipse { a: 2.0, b: 1.0 };
        let r = check_taylor_lemma1(&e, 0.0, 1.0, 3..=10).unwrap();
        assert!((r.curvature - 2.0).abs() < 1e-15);
        assert!((r.ratio_limit - 1.5f64.sqrt()).abs() < 1e-15);
        assert!(r.ratio_error < 1e-2, "{r:?}");
        assert!(r.defect_order >= 1.0);
    }

    #[test]
    fn ellipse_flat_point_is_clamped() {
        let e = Ellipse { a: 2.0, b: 1.0 };
        let r = check_taylor_lemma1(&e, FRAC_PI_2, 1.0, 3..=10).unwrap();
        assert!((r.curvature - 0.25).abs() < 1e-15);
        assert_eq!(r.levels.last().unwrap().ratio, 0.0);
        assert!(r.pass());
    }

    #[test]
    fn generic_point_is_first_order() {
        // away from a curvature extremum the one-sided pair sees k_s ≠ 0,
        // so the defect converges at first order only
        let e = Ellipse { a: 2.0, b: 1.0 };
        let r = check_taylor_lemma1(&e, 0.7, 1.0, 3..=10).unwrap();
        assert!(r.defect_order > 0.9 && r.defect_order < 1.1, "{r:?}");
        assert!(r.defect_error < 1e-4);
    }
}
