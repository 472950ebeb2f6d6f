//! Run directories: `config.json`, `snapshots/`, `series.csv` and
//! per-check reports.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::run::Trajectory;
use crate::geometry::io::{curve_to_json, fmt_f64};
use crate::geometry::DiscreteCurve;
use crate::Result;

pub const SERIES_HEADER: &str = "step,time,L,k_max,k_min,avg_k2,area,a_bar,t_bar,min_Z,l2_dev";

/// One row of `series.csv`; diagnostic columns stay empty when not computed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesRow {
    pub step: usize,
    pub time: f64,
    pub length: f64,
    pub k_max: f64,
    pub k_min: f64,
    pub avg_k2: f64,
    pub area: f64,
    pub a_bar: Option<f64>,
    pub t_bar: Option<f64>,
    pub min_z: Option<f64>,
    pub l2_dev: Option<f64>,
}

/// Geometric columns of every snapshot.
pub fn base_series(traj: &Trajectory) -> Vec<SeriesRow> {
    traj.snapshots
        .iter()
        .map(|s| SeriesRow {
            step: s.step,
            time: s.time,
            length: s.frame.length,
            k_max: s.frame.k_max(),
            k_min: s.frame.k_min(),
            avg_k2: s.frame.mean_k2,
            area: s.frame.area(),
            a_bar: None,
            t_bar: None,
            min_z: None,
            l2_dev: None,
        })
        .collect()
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn series_csv(rows: &[SeriesRow]) -> String {
    let mut s = String::with_capacity(64 + rows.len() * 256);
    s.push_str(SERIES_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.step,
            fmt_f64(r.time),
            fmt_f64(r.length),
            fmt_f64(r.k_max),
            fmt_f64(r.k_min),
            fmt_f64(r.avg_k2),
            fmt_f64(r.area),
            opt(r.a_bar),
            opt(r.t_bar),
            opt(r.min_z),
            opt(r.l2_dev),
        );
    }
    s
}

/// Hex SHA-256 of the little-endian vertex coordinates.
pub fn curve_hash(curve: &DiscreteCurve) -> String {
    let digest = Sha256::digest(curve.to_le_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// A run output directory.
#[derive(Clone, Debug)]
pub struct RunDirectory {
    root: PathBuf,
}

impl RunDirectory {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root.join("snapshots"))?;
        fs::create_dir_all(root.join("reports"))?;
        Ok(RunDirectory { root: root.to_path_buf() })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write_json<T: Serialize>(&self, relative: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(self.root.join(relative), text)?;
        Ok(())
    }

    pub fn write_config<T: Serialize>(&self, value: &T) -> Result<()> {
        self.write_json("config.json", value)
    }

    pub fn write_snapshots(&self, traj: &Trajectory) -> Result<()> {
        for s in &traj.snapshots {
            let name = format!("step {} time {}", s.step, fmt_f64(s.time));
            let file = self.root.join("snapshots").join(format!("snap_{:07}.json", s.step));
            fs::write(file, curve_to_json(&s.curve, Some(&name)))?;
        }
        Ok(())
    }

    pub fn write_series(&self, rows: &[SeriesRow]) -> Result<()> {
        fs::write(self.root.join("series.csv"), series_csv(rows))?;
        Ok(())
    }

    pub fn write_report<T: Serialize>(&self, name: &str, report: &T) -> Result<()> {
        self.write_json(&format!("reports/{name}.json"), report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run, FlowConfig};
    use crate::geometry::{io::load_curve, Vec2};
    use crate::TWO_PI;

    fn circle(n: usize) -> DiscreteCurve {
        DiscreteCurve::new((0..n).map(|i| Vec2::from_angle(TWO_PI * i as f64 / n as f64)).collect()).unwrap()
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let c = circle(16);
        assert_eq!(curve_hash(&c), curve_hash(&c.clone()));
        assert_eq!(curve_hash(&c).len(), 64);
        assert_ne!(curve_hash(&c), curve_hash(&c.scaled(1.0 + 1e-15)));
    }

    #[test]
    fn directory_layout() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = FlowConfig { n: 32, t_end: 0.02, ..Default::default() };
        let tr = run(&cfg, &circle(32)).unwrap();
        let rd = RunDirectory::create(&dir.path().join("r")).unwrap();
        rd.write_config(&cfg).unwrap();
        rd.write_snapshots(&tr).unwrap();
        let rows = base_series(&tr);
        rd.write_series(&rows).unwrap();
        let csv = fs::read_to_string(rd.path().join("series.csv")).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SERIES_HEADER);
        assert_eq!(lines.len(), 1 + tr.snapshots.len());
        assert_eq!(lines[1].split(',').count(), 11);
        assert!(!csv.contains('\r'));
        let back = load_curve(&rd.path().join("snapshots/snap_0000020.json")).unwrap();
        assert_eq!(back.vertices(), tr.last().curve.vertices());
    }
}
