use super::{is_embedded, DiscreteCurve, Vec2, MIN_VERTICES};
use crate::{Error, Result};

/// Places `n` vertices at equal arclength spacing along the polygon,
/// starting at vertex 0, by linear interpolation along its edges.
pub fn resample_uniform(curve: &DiscreteCurve, n: usize) -> Result<DiscreteCurve> {
    if n < MIN_VERTICES {
        return Err(Error::ConfigError(format!("resample to {n} < {MIN_VERTICES} vertices")));
    }
    let out = resample_unchecked(curve, n)?;
    if !is_embedded(&out) {
        return Err(Error::ResampleFailure(n));
    }
    Ok(out)
}

/// Resampling without the embeddedness check; the flow runner checks on
/// its own cadence.
pub(crate) fn resample_unchecked(curve: &DiscreteCurve, n: usize) -> Result<DiscreteCurve> {
    let p = curve.vertices();
    let m = p.len();
    let mut cum = Vec::with_capacity(m + 1);
    cum.push(0.0);
    for i in 0..m {
        let h = (p[(i + 1) % m] - p[i]).norm();
        cum.push(cum[i] + h);
    }
    let total = cum[m];
    let spacing = total / n as f64;
    let mut out = Vec::with_capacity(n);
    out.push(p[0]);
    let mut edge = 0;
    for k in 1..n {
        let s = k as f64 * spacing;
        while edge + 1 < m && cum[edge + 1] <= s {
            edge += 1;
        }
        let h = cum[edge + 1] - cum[edge];
        let t = ((s - cum[edge]) / h).clamp(0.0, 1.0);
        let a = p[edge];
        let b = p[(edge + 1) % m];
        let v: Vec2 = if t == 0.0 { a } else { a.lerp(b, t) };
        out.push(v);
    }
    DiscreteCurve::new(out).map_err(|_| Error::ResampleFailure(n))
}
