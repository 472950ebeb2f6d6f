//! Grid verification of the identities and inequalities satisfied by `f`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::func::{g, g_prime, h_second, l_minus_ltilde, l_operator, ltilde, ComparisonFn};
use crate::TWO_PI;
use std::f64::consts::PI;

/// Closed-form identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Finite-difference cross-checks.
pub const FD_TOL: f64 = 1e-6;
/// One-sided inequalities that hold with equality somewhere.
pub const INEQUALITY_TOL: f64 = 1e-10;
/// Symmetry f(x) = f(2π − x).
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Width of the band excluded next to x = 0 and x = 2π.
pub const EDGE_BAND: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub grid: String,
    /// max |residual| (equalities) or the extreme value of the checked
    /// quantity (inequalities).
    pub max_residual: f64,
    /// How far the inequality form is violated; 0 when it holds.
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    fn equality(name: &str, grid: String, residual: f64, tol: f64) -> Self {
        IdentityReport {
            name: name.into(),
            grid,
            max_residual: residual,
            max_violation: (residual - tol).max(0.0),
            tolerance: tol,
            pass: residual <= tol,
        }
    }

    /// `worst` is the minimum of a quantity that must be ≥ −tol (or > 0
    /// when `strict`).
    fn lower_bound(name: &str, grid: String, worst: f64, tol: f64, strict: bool) -> Self {
        let pass = if strict { worst > 0.0 } else { worst >= -tol };
        IdentityReport {
            name: name.into(),
            grid,
            max_residual: worst,
            max_violation: (-worst).max(0.0),
            tolerance: tol,
            pass,
        }
    }
}

/// Uniform tensor grid in (x, t).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
}

impl Grid {
    pub fn new(x: (f64, f64), nx: usize, t: (f64, f64), nt: usize) -> Self {
        Grid { x_min: x.0, x_max: x.1, nx, t_min: t.0, t_max: t.1, nt }
    }

    /// x ∈ [0.01, 2π − 0.01] × t ∈ [−5, 5].
    pub fn full(nx: usize, nt: usize) -> Self {
        Grid::new((EDGE_BAND, TWO_PI - EDGE_BAND), nx, (-5.0, 5.0), nt)
    }

    /// x ∈ (0, π] × t ∈ [−5, 5]; the smallest x is one grid step.
    pub fn half(nx: usize, nt: usize) -> Self {
        Grid::new((PI / nx as f64, PI), nx, (-5.0, 5.0), nt)
    }

    fn axis(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
        (0..n).map(move |i| if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + Clone {
        Self::axis(self.x_min, self.x_max, self.nx)
    }

    pub fn ts(&self) -> impl Iterator<Item = f64> + Clone {
        Self::axis(self.t_min, self.t_max, self.nt)
    }

    pub fn describe(&self) -> String {
        format!(
            "x in [{:.4}, {:.4}] ({} pts) x t in [{}, {}] ({} pts)",
            self.x_min, self.x_max, self.nx, self.t_min, self.t_max, self.nt
        )
    }

    fn fold<F: Fn(f64, f64) -> f64 + Sync>(&self, f: F, init: f64, pick: fn(f64, f64) -> f64) -> f64 {
        let ts: Vec<f64> = self.ts().collect();
        let xs: Vec<f64> = self.xs().collect();
        ts.par_iter()
            .map(|&t| xs.iter().fold(init, |m, &x| pick(m, f(x, t))))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(init, pick)
    }

    pub(crate) fn max_of<F: Fn(f64, f64) -> f64 + Sync>(&self, f: F) -> f64 {
        self.fold(f, f64::NEG_INFINITY, f64::max)
    }

    pub(crate) fn min_of<F: Fn(f64, f64) -> f64 + Sync>(&self, f: F) -> f64 {
        self.fold(f, f64::INFINITY, f64::min)
    }
}

/// max |L̃f| over the grid.
pub fn check_ltilde(func: &ComparisonFn, grid: &Grid) -> IdentityReport {
    let r = grid.max_of(|x, t| ltilde(func, x, t).abs());
    IdentityReport::equality(
        "Ltilde f = 0",
        format!("{} (band {EDGE_BAND} at x=0, 2pi excluded)", grid.describe()),
        r,
        IDENTITY_TOL,
    )
}

/// Closed-form derivatives of `f` against centred differences at `points`
/// random grid nodes, and L̃f assembled from the differences.
///
/// f varies in x on the scale eᵗ when t < 0, so the x-step is shrunk with
/// it to keep the truncation error of the second difference small.
pub fn check_ltilde_fd(func: &ComparisonFn, grid: &Grid, points: usize, seed: u64) -> IdentityReport {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<f64> = grid.xs().collect();
    let ts: Vec<f64> = grid.ts().collect();
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..points {
        let x = xs[rng.random_range(0..xs.len())];
        let t = ts[rng.random_range(0..ts.len())];
        let v = func.eval(x, t);
        let hx = h * t.exp().min(1.0);
        let fx = (func.value(x + hx, t) - func.value(x - hx, t)) / (2.0 * hx);
        let fxx = (func.eval(x + hx, t).dx - func.eval(x - hx, t).dx) / (2.0 * hx);
        let ft = (func.value(x, t + h) - func.value(x, t - h)) / (2.0 * h);
        let (s, c) = (0.5 * x).sin_cos();
        let lt_fd = 4.0 * fxx + v.value - 4.0 * fx / s * (fx - c) - ft;
        worst = worst
            .max((fx - v.dx).abs())
            .max((fxx - v.dxx).abs())
            .max((ft - v.dt).abs())
            .max(lt_fd.abs());
    }
    IdentityReport::equality(
        "closed-form derivatives vs finite differences",
        format!("{points} random nodes of {}, h = 1e-5 min(1, e^t)", grid.describe()),
        worst,
        FD_TOL,
    )
}

/// Lf − L̃f ≥ 0 and Lf ≥ 0 on x ∈ (0, π].
pub fn check_l_dominates(func: &ComparisonFn, grid: &Grid) -> Vec<IdentityReport> {
    let diff = grid.min_of(|x, t| l_minus_ltilde(func, x, t));
    let lf = grid.min_of(|x, t| l_operator(func, x, t));
    vec![
        IdentityReport::lower_bound("Lf - Ltilde f >= 0", grid.describe(), diff, INEQUALITY_TOL, false),
        IdentityReport::lower_bound("Lf >= 0", grid.describe(), lf, INEQUALITY_TOL, false),
    ]
}

/// h″ ≥ 0 for h(z) = arccos(z)² on [0, 1 − 1e−6].
pub fn check_h_convexity(points: usize) -> IdentityReport {
    let top = 1.0 - 1e-6;
    let worst = (0..points)
        .map(|i| h_second(top * i as f64 / (points - 1) as f64))
        .fold(f64::INFINITY, f64::min);
    IdentityReport::lower_bound(
        "h'' >= 0, h(z) = arccos(z)^2",
        format!("z in [0, 1-1e-6] ({points} pts)"),
        worst,
        0.0,
        false,
    )
}

/// g(z) > 0 and g′(z) > 0 for z > 0 on a log grid, plus g(0) = 0.
pub fn check_g_positive() -> IdentityReport {
    let zs = (0..=160).map(|i| 10f64.powf(-8.0 + 0.0625 * i as f64));
    let worst = zs
        .map(|z| g(z).min(g_prime(z)))
        .fold(f64::INFINITY, f64::min);
    let mut r = IdentityReport::lower_bound(
        "g(z) > 0 for z > 0",
        "z in [1e-8, 1e2] log-spaced (161 pts)".into(),
        worst,
        0.0,
        true,
    );
    if g(0.0) != 0.0 {
        r.pass = false;
    }
    r
}

/// Monotonicity in t, concavity, symmetry and the two limits.
pub fn check_f_shape(func: &ComparisonFn, grid: &Grid) -> Vec<IdentityReport> {
    let desc = grid.describe();
    let ft_min = grid.min_of(|x, t| func.eval(x, t).dt);
    let fxx_max = grid.max_of(|x, t| func.eval(x, t).dxx);
    let sym = grid.max_of(|x, t| (func.value(x, t) - func.value(TWO_PI - x, t)).abs());
    let xs: Vec<f64> = (0..=400).map(|i| TWO_PI * i as f64 / 400.0).collect();
    let upper = xs
        .iter()
        .map(|&x| (func.value(x, 20.0) - 2.0 * (0.5 * x).sin()).abs())
        .fold(0.0, f64::max);
    let lower = xs.iter().map(|&x| func.value(x, -20.0).abs()).fold(0.0, f64::max);
    vec![
        IdentityReport::lower_bound("df/dt > 0", desc.clone(), ft_min, 0.0, true),
        IdentityReport::lower_bound("f'' < 0", desc.clone(), -fxx_max, 0.0, true),
        IdentityReport::equality("f(x) = f(2pi - x)", desc, sym, SYMMETRY_TOL),
        IdentityReport::equality("f(x, 20) -> 2 sin(x/2)", "x in [0, 2pi] (401 pts)".into(), upper, 1e-8),
        IdentityReport::equality("f(x, -20) -> 0", "x in [0, 2pi] (401 pts)".into(), lower, 1.6e-8),
    ]
}

/// Subadditivity f(x + y) ≤ f(x) + f(y) on a grid with x + y < 2π.
pub fn check_subadditive(func: &ComparisonFn, n: usize, t: f64) -> IdentityReport {
    let mut worst = f64::INFINITY;
    for i in 1..n {
        for j in 1..n - i {
            let x = TWO_PI * i as f64 / n as f64;
            let y = TWO_PI * j as f64 / n as f64;
            worst = worst.min(func.value(x, t) + func.value(y, t) - func.value(x + y, t));
        }
    }
    IdentityReport::lower_bound("f(x+y) <= f(x) + f(y)", format!("{n} x {n} grid at t = {t}"), worst, 1e-12, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_grid_passes() {
        let f = ComparisonFn::EXACT;
        let r = check_ltilde(&f, &Grid::full(400, 101));
        assert!(r.pass, "{r:?}");
        assert!(r.max_residual < 1e-9);
        assert!(check_ltilde_fd(&f, &Grid::full(400, 101), 20, 7).pass);
        for r in check_l_dominates(&f, &Grid::half(400, 101)) {
            assert!(r.pass, "{r:?}");
        }
        assert!(check_h_convexity(10_000).pass);
        assert!(check_g_positive().pass);
        for r in check_f_shape(&f, &Grid::full(400, 101)) {
            assert!(r.pass, "{r:?}");
        }
        assert!(check_subadditive(&f, 64, 0.3).pass);
    }

    #[test]
    fn l_dominance_is_tight_at_half_turn() {
        let f = ComparisonFn::EXACT;
        for t in [-3.0, 0.0, 4.0] {
            assert!(l_minus_ltilde(&f, PI, t).abs() < 1e-10);
        }
    }

    #[test]
    fn concave_at_quarter_turn() {
        assert!(ComparisonFn::EXACT.eval(std::f64::consts::FRAC_PI_2, 0.0).dxx < 0.0);
    }

    #[test]
    fn symmetric_pair() {
        let f = ComparisonFn::EXACT;
        assert!((f.value(1.0, 0.3) - f.value(TWO_PI - 1.0, 0.3)).abs() < 1e-12);
    }

    #[test]
    fn perturbation_is_detected() {
        let f = ComparisonFn::perturbed(1e-6);
        assert!(!check_ltilde(&f, &Grid::full(100, 21)).pass);
    }

    proptest! {
        #[test]
        fn subadditive_random(x in 1e-3f64..6.0, frac in 0.0f64..1.0, t in -5.0f64..5.0) {
            let y = (TWO_PI - x - 1e-9) * frac;
            prop_assume!(y > 0.0);
            let f = ComparisonFn::EXACT;
            prop_assert!(f.value(x + y, t) <= f.value(x, t) + f.value(y, t) + 1e-12);
        }
    }
}
