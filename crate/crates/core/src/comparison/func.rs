//! The comparison function `f(x, t) = 2 eᵗ arctan(e⁻ᵗ sin(x/2))` with its
//! closed-form derivatives, and the companions `g` and `h`.
//!
//! Evaluation is arranged so that no intermediate overflows for
//! |t| ≤ 700: with `z = e⁻ᵗ sin(x/2)` the identity `eᵗ = sin(x/2) / z` is
//! used whenever `z ≤ 1`.

use serde::Serialize;

use crate::{Error, Result, TWO_PI};

/// g(z) = arctan z − z / (1 + z²).
pub fn g(z: f64) -> f64 {
    if z.abs() < 0.1 {
        z * g_over_z_series(z)
    } else {
        z.atan() - z / (1.0 + z * z)
    }
}

/// g′(z) = 2z² / (1 + z²)².
pub fn g_prime(z: f64) -> f64 {
    let d = 1.0 + z * z;
    2.0 * z * z / (d * d)
}

/// g(z)/z by its alternating series Σ (−1)ⁿ⁺¹ 2n/(2n+1) z²ⁿ, |z| < 0.1.
fn g_over_z_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z2;
    let mut sum = 0.0;
    for n in 1..=12 {
        let nf = n as f64;
        let c = 2.0 * nf / (2.0 * nf + 1.0);
        sum += if n % 2 == 1 { c * term } else { -c * term };
        term *= z2;
    }
    sum
}

/// arctan(z) / z, continuous at 0.
fn atanc(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 - z * z / 3.0
    } else {
        z.atan() / z
    }
}

/// h(z) = arccos(z)².
pub fn h(z: f64) -> f64 {
    let a = z.acos();
    a * a
}

/// h′(z) = −2 arccos(z) / √(1 − z²).
pub fn h_prime(z: f64) -> f64 {
    let th = z.acos();
    if th < 1e-8 {
        return -2.0;
    }
    -2.0 * th / th.sin()
}

/// h″(z) = 2 (sin θ − θ cos θ) / sin³ θ with θ = arccos z.
pub fn h_second(z: f64) -> f64 {
    let th = z.acos();
    let s = th.sin();
    let num = if th < 1e-2 {
        let t2 = th * th;
        // sin θ − θ cos θ = θ³/3 − θ⁵/30 + θ⁷/840 − θ⁹/45360
        th * t2 * (1.0 / 3.0 - t2 * (1.0 / 30.0 - t2 * (1.0 / 840.0 - t2 / 45360.0)))
    } else {
        s - th * th.cos()
    };
    2.0 * num / (s * s * s)
}

/// Value and derivatives of `f` at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FValue {
    pub value: f64,
    /// ∂f/∂x
    pub dx: f64,
    /// ∂²f/∂x²
    pub dxx: f64,
    /// ∂f/∂t
    pub dt: f64,
}

/// The comparison function, optionally perturbed by `ε·x` so that the
/// identity checks can be shown to detect a wrong `f`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComparisonFn {
    pub perturbation: f64,
}

impl ComparisonFn {
    pub const EXACT: ComparisonFn = ComparisonFn { perturbation: 0.0 };

    pub fn perturbed(eps: f64) -> Self {
        ComparisonFn { perturbation: eps }
    }

    #[inline]
    pub fn value(&self, x: f64, t: f64) -> f64 {
        f_raw(x, t) + self.perturbation * x
    }

    pub fn eval(&self, x: f64, t: f64) -> FValue {
        let mut v = f_all(x, t);
        v.value += self.perturbation * x;
        v.dx += self.perturbation;
        v
    }
}

/// f(x, t) without domain checks.
#[inline]
pub fn f_raw(x: f64, t: f64) -> f64 {
    let s = (0.5 * x).sin();
    let q = (-t).exp();
    let z = q * s;
    if z.abs() <= 1.0 {
        2.0 * s * atanc(z)
    } else {
        2.0 * t.exp() * z.atan()
    }
}

fn f_all(x: f64, t: f64) -> FValue {
    let (s, c) = (0.5 * x).sin_cos();
    let q = (-t).exp();
    let z = q * s;
    let d = 1.0 + z * z;
    let small = z.abs() <= 1.0;
    let value = if small { 2.0 * s * atanc(z) } else { 2.0 * t.exp() * z.atan() };
    // q·z/(1 + z²), rewritten to stay finite when q is huge
    let qz_d = if small { q * z / d } else { 1.0 / (s * (1.0 + 1.0 / (z * z))) };
    let dt = if z == 0.0 {
        0.0
    } else if small {
        2.0 * s * g(z) / z
    } else {
        2.0 * t.exp() * g(z)
    };
    FValue {
        value,
        dx: c / d,
        dxx: -s / (2.0 * d) - qz_d * c * c / d,
        dt,
    }
}

#[inline]
pub(crate) fn f_all_dt(x: f64, t: f64) -> f64 {
    f_all(x, t).dt
}

/// f(x, t) with its derivatives; `x` must lie in [0, 2π].
pub fn f_eval(x: f64, t: f64) -> Result<FValue> {
    if !(0.0..=TWO_PI).contains(&x) {
        return Err(Error::DomainError(format!("f: x = {x}")));
    }
    if !t.is_finite() {
        return Err(Error::DomainError(format!("f: t = {t}")));
    }
    Ok(f_all(x, t))
}

/// L̃f = 4f″ + f − (4f′/sin(x/2))(f′ − cos(x/2)) − ∂f/∂t.
pub fn ltilde(func: &ComparisonFn, x: f64, t: f64) -> f64 {
    let v = func.eval(x, t);
    let (s, c) = (0.5 * x).sin_cos();
    4.0 * v.dxx + v.value - 4.0 * v.dx / s * (v.dx - c) - v.dt
}

/// Lf = 4f″ + f − f′x + 4(f′/x) arccos²(f′) − ∂f/∂t.
pub fn l_operator(func: &ComparisonFn, x: f64, t: f64) -> f64 {
    let v = func.eval(x, t);
    let fp = v.dx.clamp(-1.0, 1.0);
    4.0 * v.dxx + v.value - v.dx * x + 4.0 * v.dx / x * h(fp) - v.dt
}

/// Lf − L̃f evaluated from its own terms (the shared terms cancel exactly).
pub fn l_minus_ltilde(func: &ComparisonFn, x: f64, t: f64) -> f64 {
    let v = func.eval(x, t);
    let fp = v.dx.clamp(-1.0, 1.0);
    let (s, c) = (0.5 * x).sin_cos();
    -v.dx * x + 4.0 * v.dx / x * h(fp) + 4.0 * v.dx / s * (v.dx - c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn f_at_zero_and_pi() {
        for t in [-30.0, -1.0, 0.0, 2.0, 50.0, 700.0] {
            assert_eq!(f_eval(0.0, t).unwrap().value, 0.0);
        }
        let v = f_eval(PI, 0.0).unwrap();
        assert!((v.value - FRAC_PI_2).abs() < 1e-15);
        // ∂f/∂t(π, 0) = 2 g(1) = π/2 − 1
        assert!((v.dt - (FRAC_PI_2 - 1.0)).abs() < 1e-15);
        assert!(v.dt > 0.0);
    }

    #[test]
    fn f_limits() {
        for i in 0..=400 {
            let x = TWO_PI * i as f64 / 400.0;
            let v = f_eval(x, 20.0).unwrap().value;
            assert!((v - 2.0 * (0.5 * x).sin()).abs() < 1e-8);
            assert!(f_eval(x, -20.0).unwrap().value < 1.6e-8);
        }
    }

    #[test]
    fn f_domain() {
        assert!(f_eval(-1e-9, 0.0).is_err());
        assert!(f_eval(TWO_PI + 1e-9, 0.0).is_err());
        assert!(f_eval(1.0, f64::NAN).is_err());
    }

    #[test]
    fn extreme_times_stay_finite() {
        for t in [-700.0, -300.0, 300.0, 700.0] {
            for x in [1e-6, 0.5, PI, 6.0] {
                let v = f_eval(x, t).unwrap();
                assert!(v.value.is_finite() && v.dx.is_finite());
                assert!(v.dxx.is_finite() && v.dt.is_finite(), "{x} {t} {v:?}");
            }
        }
    }

    #[test]
    fn g_values() {
        assert_eq!(g(0.0), 0.0);
        assert!((g(1.0) - (FRAC_PI_4 - 0.5)).abs() < 1e-15);
        for z in [0.01, 0.1, 1.0, 10.0, 100.0] {
            assert!(g(z) > 0.0);
        }
        // series and direct forms agree at the switch point
        let z: f64 = 0.0999999;
        let direct = z.atan() - z / (1.0 + z * z);
        assert!((g(z) - direct).abs() < 1e-16);
    }

    #[test]
    fn h_second_matches_closed_form_away_from_one() {
        for z in [0.0f64, 0.3, 0.7, 0.95] {
            let w = 1.0 - z * z;
            let direct = 2.0 / w - 2.0 * z * z.acos() / w.powf(1.5);
            assert!((h_second(z) - direct).abs() < 1e-10);
        }
        assert!((h_second(1.0 - 1e-12) - 2.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn ltilde_vanishes_at_quarter_turn() {
        assert!(ltilde(&ComparisonFn::EXACT, FRAC_PI_2, 0.0).abs() < 1e-10);
    }
}
