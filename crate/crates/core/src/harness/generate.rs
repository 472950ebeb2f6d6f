//! Test-curve factory: circles, ellipses, dumbbells and random Fourier
//! curves, all sampled at equal arclength and positively oriented.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::comparison::taylor::theta_at_arc;
use crate::comparison::{AnalyticCurve, Ellipse};
use crate::geometry::{is_embedded, DiscreteCurve, Vec2};
use crate::{Error, Result, TWO_PI};

/// Amplitude of mode `m` in a random Fourier curve is `FOURIER_AMPLITUDE / m²`.
pub const FOURIER_AMPLITUDE: f64 = 0.15;
pub const FOURIER_MAX_ATTEMPTS: usize = 100;

/// Half-length of the dumbbell along its axis.
const DUMBBELL_HALF_LENGTH: f64 = 1.6;
/// Height scale of the dumbbell lobes.
const DUMBBELL_HEIGHT: f64 = 1.5;

/// A generator with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Circle { r: f64, n: usize },
    Ellipse { a: f64, b: f64, n: usize },
    Dumbbell { neck: f64, n: usize },
    Fourier { seed: u64, modes: usize, n: usize },
}

impl GeneratorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Circle { .. } => "circle",
            GeneratorSpec::Ellipse { .. } => "ellipse",
            GeneratorSpec::Dumbbell { .. } => "dumbbell",
            GeneratorSpec::Fourier { .. } => "fourier",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            GeneratorSpec::Circle { n, .. }
            | GeneratorSpec::Ellipse { n, .. }
            | GeneratorSpec::Dumbbell { n, .. }
            | GeneratorSpec::Fourier { n, .. } => n,
        }
    }

    /// Builds a spec from a generator name and numeric parameters; missing
    /// parameters take their defaults.
    pub fn from_params(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match name {
            "circle" => &["r", "n"],
            "ellipse" => &["a", "b", "n"],
            "dumbbell" => &["neck", "n"],
            "fourier" => &["seed", "modes", "n"],
            other => return Err(Error::ConfigError(format!("unknown generator `{other}`"))),
        };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::ConfigError(format!("generator `{name}` has no parameter `{k}`")));
        }
        let get = |k: &str, default: f64| params.get(k).copied().unwrap_or(default);
        let count = |k: &str, default: usize| -> Result<usize> {
            let v = get(k, default as f64);
            if v < 0.0 || v.fract() != 0.0 || !v.is_finite() {
                return Err(Error::ConfigError(format!("`{k}` must be a non-negative integer, got {v}")));
            }
            Ok(v as usize)
        };
        let n = count("n", 512)?;
        Ok(match name {
            "circle" => GeneratorSpec::Circle { r: get("r", 1.0), n },
            "ellipse" => GeneratorSpec::Ellipse { a: get("a", 2.0), b: get("b", 1.0), n },
            "dumbbell" => GeneratorSpec::Dumbbell { neck: get("neck", 0.2), n },
            _ => GeneratorSpec::Fourier { seed: count("seed", 1)? as u64, modes: count("modes", 6)?, n },
        })
    }

    pub fn generate(&self) -> Result<DiscreteCurve> {
        let n = self.n();
        if n < crate::geometry::MIN_VERTICES {
            return Err(Error::ConfigError(format!("n = {n} is too small")));
        }
        let curve = match *self {
            GeneratorSpec::Circle { r, .. } => {
                positive("r", r)?;
                circle(r, n)?
            }
            GeneratorSpec::Ellipse { a, b, .. } => {
                positive("a", a)?;
                positive("b", b)?;
                arclength_sample(&Ellipse { a, b }, n)?
            }
            GeneratorSpec::Dumbbell { neck, .. } => {
                if !(neck > 0.0 && neck < DUMBBELL_HEIGHT) {
                    return Err(Error::ConfigError(format!("neck = {neck} outside (0, {DUMBBELL_HEIGHT})")));
                }
                arclength_sample(&Dumbbell::with_neck(neck), n)?
            }
            GeneratorSpec::Fourier { seed, modes, .. } => fourier(seed, modes, n)?,
        };
        if !is_embedded(&curve) {
            return Err(Error::GenerationFailure(format!("{} output is not embedded", self.name())));
        }
        Ok(curve)
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::ConfigError(format!("{name} = {v} must be positive")))
    }
}

/// `generate(name, params)`: the generator by name with numeric parameters.
pub fn generate(name: &str, params: &BTreeMap<String, f64>) -> Result<DiscreteCurve> {
    GeneratorSpec::from_params(name, params)?.generate()
}

pub fn circle(r: f64, n: usize) -> Result<DiscreteCurve> {
    DiscreteCurve::new((0..n).map(|i| Vec2::from_angle(TWO_PI * i as f64 / n as f64) * r).collect())
}

/// `n` points at equal arclength along an analytic curve, starting at θ = 0.
pub fn arclength_sample<C: AnalyticCurve + ?Sized>(curve: &C, n: usize) -> Result<DiscreteCurve> {
    let spacing = curve.perimeter() / n as f64;
    let mut theta = 0.0;
    let mut pts = Vec::with_capacity(n);
    pts.push(curve.position(0.0));
    for _ in 1..n {
        theta = theta_at_arc(curve, theta, spacing);
        pts.push(curve.position(theta));
    }
    DiscreteCurve::new(pts)
}

/// Two round lobes joined by a neck:
/// `x = 1.6 cos u`, `y = H sin u (w + (1 − w) cos² u)`, neck width `2Hw`.
#[derive(Clone, Copy, Debug)]
pub struct Dumbbell {
    pub w: f64,
}

impl Dumbbell {
    pub fn with_neck(neck: f64) -> Self {
        Dumbbell { w: neck / (2.0 * DUMBBELL_HEIGHT) }
    }

    fn profile(&self, u: f64) -> (f64, f64, f64) {
        // g = w + (1 − w) cos² u and the first two derivatives of y
        let (s, c) = u.sin_cos();
        let w = self.w;
        let g = w + (1.0 - w) * c * c;
        let y = DUMBBELL_HEIGHT * s * g;
        let gp = w + (1.0 - w) * (c * c - 2.0 * s * s);
        let dy = DUMBBELL_HEIGHT * c * gp;
        let ddy = DUMBBELL_HEIGHT * (-s * gp - 6.0 * (1.0 - w) * s * c * c);
        (y, dy, ddy)
    }
}

impl AnalyticCurve for Dumbbell {
    fn name(&self) -> String {
        format!("dumbbell(neck {})", 2.0 * DUMBBELL_HEIGHT * self.w)
    }

    fn position(&self, u: f64) -> Vec2 {
        Vec2::new(DUMBBELL_HALF_LENGTH * u.cos(), self.profile(u).0)
    }

    fn velocity(&self, u: f64) -> Vec2 {
        Vec2::new(-DUMBBELL_HALF_LENGTH * u.sin(), self.profile(u).1)
    }

    fn curvature(&self, u: f64) -> f64 {
        let v = self.velocity(u);
        let acc = Vec2::new(-DUMBBELL_HALF_LENGTH * u.cos(), self.profile(u).2);
        v.cross(acc) / v.norm().powi(3)
    }
}

/// `x = cos u + Σ (a_m cos mu + b_m sin mu)`, `y = sin u + Σ (c_m cos mu + d_m sin mu)`.
#[derive(Clone, Debug)]
pub struct FourierCurve {
    /// `[a_m, b_m, c_m, d_m]` for m = 2, 3, …
    pub coefficients: Vec<[f64; 4]>,
}

impl FourierCurve {
    pub fn random(rng: &mut impl Rng, modes: usize) -> Self {
        let coefficients = (2..=modes)
            .map(|m| {
                let amp = FOURIER_AMPLITUDE / (m * m) as f64;
                [(); 4].map(|_| rng.random_range(-amp..amp))
            })
            .collect();
        FourierCurve { coefficients }
    }

    /// Derivative of order `k` (0, 1 or 2).
    fn derivative(&self, u: f64, k: i32) -> Vec2 {
        let rot = |c: f64, s: f64, m: f64| -> (f64, f64) {
            // k-th derivative of (cos mu, sin mu)
            match k {
                0 => (c, s),
                1 => (-m * s, m * c),
                _ => (-m * m * c, -m * m * s),
            }
        };
        let (c1, s1) = rot(u.cos(), u.sin(), 1.0);
        let mut p = Vec2::new(c1, s1);
        for (idx, co) in self.coefficients.iter().enumerate() {
            let m = (idx + 2) as f64;
            let (cm, sm) = rot((m * u).cos(), (m * u).sin(), m);
            p += Vec2::new(co[0] * cm + co[1] * sm, co[2] * cm + co[3] * sm);
        }
        p
    }
}

impl AnalyticCurve for FourierCurve {
    fn name(&self) -> String {
        format!("fourier({} modes)", self.coefficients.len() + 1)
    }

    fn position(&self, u: f64) -> Vec2 {
        self.derivative(u, 0)
    }

    fn velocity(&self, u: f64) -> Vec2 {
        self.derivative(u, 1)
    }

    fn curvature(&self, u: f64) -> f64 {
        let v = self.velocity(u);
        v.cross(self.derivative(u, 2)) / v.norm().powi(3)
    }
}

/// Area centroid of a polygon.
fn area_centroid(c: &DiscreteCurve) -> Vec2 {
    let p = c.vertices();
    let n = p.len();
    let mut acc = Vec2::new(0.0, 0.0);
    let mut a2 = 0.0;
    for i in 0..n {
        let (u, v) = (p[i], p[(i + 1) % n]);
        let cr = u.cross(v);
        a2 += cr;
        acc += (u + v) * cr;
    }
    acc * (1.0 / (3.0 * a2))
}

/// Random embedded Fourier curve, centred on its area centroid. Draws up
/// to [`FOURIER_MAX_ATTEMPTS`] coefficient sets from a seeded ChaCha8
/// stream.
pub fn fourier(seed: u64, modes: usize, n: usize) -> Result<DiscreteCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..FOURIER_MAX_ATTEMPTS {
        let f = FourierCurve::random(&mut rng, modes);
        // reject cusps before sampling by arclength
        let min_speed = (0..4096)
            .map(|i| f.speed(TWO_PI * i as f64 / 4096.0))
            .fold(f64::INFINITY, f64::min);
        if min_speed < 1e-3 {
            continue;
        }
        let c = match arclength_sample(&f, n) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if c.was_reversed() || !is_embedded(&c) {
            continue;
        }
        let centre = area_centroid(&c);
        return Ok(c.translated(centre * -1.0));
    }
    Err(Error::GenerationFailure(format!(
        "no embedded Fourier curve in {FOURIER_MAX_ATTEMPTS} attempts (seed {seed}, {modes} modes)"
    )))
}
