//! Curve files: JSON `{"vertices": [[x, y], ...], "name": "..."}` or a
//! header-less two-column CSV. Writers emit 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::{DiscreteCurve, Vec2};
use crate::{Error, Result};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Deserialize)]
struct CurveFile {
    vertices: Vec<[f64; 2]>,
    #[serde(default)]
    name: Option<String>,
}

pub fn curve_to_json(curve: &DiscreteCurve, name: Option<&str>) -> String {
    let mut s = String::from("{\"vertices\": [");
    for (i, v) in curve.vertices().iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "[{}, {}]", fmt_f64(v.x), fmt_f64(v.y));
    }
    s.push(']');
    if let Some(name) = name {
        let _ = write!(s, ", \"name\": {}", serde_json::to_string(name).unwrap_or_default());
    }
    s.push_str("}\n");
    s
}

pub fn curve_to_csv(curve: &DiscreteCurve) -> String {
    let mut s = String::with_capacity(curve.len() * 48);
    for v in curve.vertices() {
        let _ = writeln!(s, "{},{}", fmt_f64(v.x), fmt_f64(v.y));
    }
    s
}

/// Parses a JSON curve file, returning the curve and its optional name.
pub fn curve_from_json(text: &str) -> Result<(DiscreteCurve, Option<String>)> {
    let raw: CurveFile = serde_json::from_str(text)?;
    Ok((DiscreteCurve::from_xy(&raw.vertices)?, raw.name))
}

pub fn curve_from_csv(text: &str) -> Result<DiscreteCurve> {
    let mut pts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let parse = |c: Option<&str>| -> Result<f64> {
            c.ok_or_else(|| Error::Parse(format!("line {}: expected two columns", lineno + 1)))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
        };
        let x = parse(cols.next())?;
        let y = parse(cols.next())?;
        if cols.next().is_some() {
            return Err(Error::Parse(format!("line {}: expected two columns", lineno + 1)));
        }
        pts.push(Vec2::new(x, y));
    }
    DiscreteCurve::new(pts)
}

/// Loads a curve, choosing the format from the extension (`.csv` or JSON).
pub fn load_curve(path: &Path) -> Result<DiscreteCurve> {
    let text = std::fs::read_to_string(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        curve_from_csv(&text)
    } else {
        curve_from_json(&text).map(|(c, _)| c)
    }
}

pub fn store_curve(path: &Path, curve: &DiscreteCurve, name: Option<&str>) -> Result<()> {
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let text = if is_csv { curve_to_csv(curve) } else { curve_to_json(curve, name) };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TWO_PI;
    use proptest::prelude::*;

    fn wobbly(n: usize, phase: f64) -> DiscreteCurve {
        DiscreteCurve::new(
            (0..n)
                .map(|i| {
                    let t = TWO_PI * i as f64 / n as f64;
                    Vec2::from_angle(t) * (1.0 + 0.2 * (3.0 * t + phase).sin()) * std::f64::consts::E
                })
                .collect(),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn json_and_csv_are_bit_exact(n in 8usize..64, phase in 0.0f64..6.0) {
            let c = wobbly(n, phase);
            let (j, name) = curve_from_json(&curve_to_json(&c, Some("w"))).unwrap();
            prop_assert_eq!(name.as_deref(), Some("w"));
            prop_assert_eq!(j.vertices(), c.vertices());
            let k = curve_from_csv(&curve_to_csv(&c)).unwrap();
            prop_assert_eq!(k.vertices(), c.vertices());
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn csv_rejects_bad_rows() {
        assert!(matches!(curve_from_csv("1,2\n3\n"), Err(Error::Parse(_))));
        assert!(matches!(curve_from_csv("1,2,3\n"), Err(Error::Parse(_))));
        assert!(matches!(curve_from_csv("a,b\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn json_without_name() {
        let text = r#"{"vertices": [[1,0],[0.7,0.7],[0,1],[-0.7,0.7],[-1,0],[-0.7,-0.7],[0,-1],[0.7,-0.7]]}"#;
        let (c, name) = curve_from_json(text).unwrap();
        assert_eq!(c.len(), 8);
        assert!(name.is_none());
    }
}
