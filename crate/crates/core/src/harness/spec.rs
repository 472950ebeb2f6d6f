//! Run specifications and their on-disk echo.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::generate::GeneratorSpec;
use crate::dynamics::FlowConfig;
use crate::geometry::io::load_curve;
use crate::geometry::DiscreteCurve;
use crate::{Error, Result};

/// Environment variable naming the default root for run directories.
pub const OUT_DIR_ENV: &str = "CSFLAB_OUT_DIR";
/// Root used when [`OUT_DIR_ENV`] is unset.
pub const DEFAULT_OUT_ROOT: &str = "runs";

/// Where the initial curve comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveSource {
    Generator(GeneratorSpec),
    Input(PathBuf),
}

impl CurveSource {
    /// Short label used for default directory names.
    pub fn label(&self) -> String {
        match self {
            CurveSource::Generator(g) => g.name().to_string(),
            CurveSource::Input(p) => p
                .file_stem()
                .map_or_else(|| "input".to_string(), |s| s.to_string_lossy().into_owned()),
        }
    }

    pub fn load(&self) -> Result<DiscreteCurve> {
        match self {
            CurveSource::Generator(g) => g.generate(),
            CurveSource::Input(p) => load_curve(p),
        }
    }
}

/// A hard or informational check evaluated on a finished run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    DistanceComparison,
    AbarDecay,
    CurvatureBound,
    /// The L² bound and the ∫(k−1)² identity.
    Convergence,
    /// Fitted decay of sup|∂k/∂s|; never fails a run.
    DerivativeDecay,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::DistanceComparison,
        Check::AbarDecay,
        Check::CurvatureBound,
        Check::Convergence,
        Check::DerivativeDecay,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Check::DistanceComparison => "distance-comparison",
            Check::AbarDecay => "abar-decay",
            Check::CurvatureBound => "curvature-bound",
            Check::Convergence => "convergence",
            Check::DerivativeDecay => "derivative-decay",
        }
    }

    pub fn is_hard(&self) -> bool {
        !matches!(self, Check::DerivativeDecay)
    }

    /// Parses a comma-separated list; `all` selects every check and `none`
    /// selects nothing.
    pub fn parse_list(text: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for word in text.split(',').map(str::trim).filter(|w| !w.is_empty()) {
            match word {
                "all" => out.extend(Check::ALL),
                "none" => {}
                w => out.push(
                    Check::ALL
                        .into_iter()
                        .find(|c| c.as_str() == w)
                        .ok_or_else(|| Error::ConfigError(format!("unknown check `{w}`")))?,
                ),
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub source: CurveSource,
    pub config: FlowConfig,
    pub checks: Vec<Check>,
    pub out_dir: PathBuf,
    /// Seed of the random generator; must match a Fourier generator's seed.
    pub seed: u64,
}

impl RunSpec {
    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if let CurveSource::Generator(GeneratorSpec::Fourier { seed, .. }) = &self.source {
            if *seed != self.seed {
                return Err(Error::ConfigError(format!(
                    "fourier seed {seed} differs from run seed {}",
                    self.seed
                )));
            }
        }
        Ok(())
    }

    pub fn wants(&self, check: Check) -> bool {
        self.checks.contains(&check)
    }
}

/// Default output root: `$CSFLAB_OUT_DIR` if set, else `runs`.
pub fn default_out_root() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from(DEFAULT_OUT_ROOT), PathBuf::from)
}

/// The contents of `config.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    pub spec: RunSpec,
    /// SHA-256 of the initial curve as generated or loaded.
    pub initial_curve_hash: String,
    pub code_version: String,
}

impl ConfigEcho {
    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> RunSpec {
        RunSpec {
            source: CurveSource::Generator(GeneratorSpec::Fourier { seed: 3, modes: 6, n: 128 }),
            config: FlowConfig::default(),
            checks: Check::ALL.to_vec(),
            out_dir: PathBuf::from("runs/x"),
            seed: 3,
        }
    }

    #[test]
    fn check_lists() {
        assert_eq!(Check::parse_list("all").unwrap(), Check::ALL.to_vec());
        assert_eq!(Check::parse_list("none").unwrap(), vec![]);
        assert_eq!(
            Check::parse_list("curvature-bound, abar-decay,abar-decay").unwrap(),
            vec![Check::AbarDecay, Check::CurvatureBound]
        );
        assert!(matches!(Check::parse_list("bogus"), Err(Error::ConfigError(_))));
    }

    #[test]
    fn echo_round_trip() {
        let echo = ConfigEcho { spec: spec(), initial_curve_hash: "ab".into(), code_version: "0".into() };
        let text = serde_json::to_string_pretty(&echo).unwrap();
        assert_eq!(serde_json::from_str::<ConfigEcho>(&text).unwrap(), echo);
    }

    #[test]
    fn seed_mismatch_rejected() {
        let mut s = spec();
        assert!(s.validate().is_ok());
        s.seed = 4;
        assert!(matches!(s.validate(), Err(Error::ConfigError(_))));
    }

    #[test]
    fn input_label() {
        assert_eq!(CurveSource::Input("a/b/figure8.json".into()).label(), "figure8");
    }
}
