//! Strict JSON run configuration.
//!
//! ```json
//! {
//!   "scenario": "smooth2d",
//!   "alpha": 2,
//!   "epsilon": 0.5,
//!   "tau": 1e-3,
//!   "horizon": {"longTime": 1},
//!   "gridOverride": [64, 64],
//!   "variant": "real",
//!   "snapshots": [0.5, 1.0],
//!   "outputs": "out/run1"
//! }
//! ```
//!
//! Only `scenario`, `alpha`, `epsilon` and `horizon` are required.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{ModelParams, Variant};
use crate::error::{Error, Result};
use crate::experiments::{step_count, Horizon};
use crate::scenarios::ScenarioName;

pub const DEFAULT_TAU: f64 = 1e-3;
pub const DEFAULT_OUTPUTS: &str = "frsg-out";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum HorizonSpec {
    #[serde(rename = "t")]
    T(f64),
    #[serde(rename = "longTime")]
    LongTime(f64),
}

impl From<HorizonSpec> for Horizon {
    fn from(h: HorizonSpec) -> Self {
        match h {
            HorizonSpec::T(t) => Horizon::FixedT(t),
            HorizonSpec::LongTime(t) => Horizon::LongTime(t),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct RawConfig {
    scenario: String,
    alpha: f64,
    epsilon: f64,
    tau: Option<f64>,
    horizon: HorizonSpec,
    grid_override: Option<Vec<usize>>,
    variant: Option<String>,
    snapshots: Option<Vec<f64>>,
    outputs: Option<PathBuf>,
}

/// A validated run description with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub scenario: ScenarioName,
    pub alpha: f64,
    pub epsilon: f64,
    pub tau: f64,
    pub horizon: HorizonSpec,
    pub grid_override: Vec<usize>,
    #[serde(serialize_with = "variant_label")]
    pub variant: Variant,
    pub snapshots: Vec<f64>,
    pub outputs: PathBuf,
}

fn variant_label<S: serde::Serializer>(v: &Variant, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.label())
}

/// Line (1-based) of the first occurrence of `"key"` in `text`.
fn key_line(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

fn at_key(source: &str, text: &str, key: &str, msg: impl std::fmt::Display) -> Error {
    match key_line(text, key) {
        Some(line) => Error::Config(format!("{source}: line {line}: {key}: {msg}")),
        None => Error::Config(format!("{source}: {key}: {msg}")),
    }
}

impl RunConfig {
    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.alpha, self.epsilon, self.variant)
    }

    pub fn horizon_time(&self) -> f64 {
        Horizon::from(self.horizon).time(self.epsilon)
    }

    pub fn steps(&self) -> Result<usize> {
        step_count(self.horizon_time(), self.tau)
    }

    /// Point counts per axis.
    pub fn points(&self) -> Vec<usize> {
        let dim = self.scenario.dim();
        match self.grid_override.len() {
            0 => vec![self.scenario.default_points(); dim],
            1 => vec![self.grid_override[0]; dim],
            _ => self.grid_override.clone(),
        }
    }

    /// Write the resolved configuration next to the run's outputs.
    pub fn echo(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("config.resolved.json");
        fs::write(&path, serde_json::to_vec_pretty(self)?).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

/// Parse and validate configuration text; `source` names it in diagnostics.
pub fn parse_config_str(text: &str, source: &str) -> Result<RunConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
        Error::Config(format!("{source}: line {}: {e}", e.line()))
    })?;
    let bad = |key: &str, msg: String| at_key(source, text, key, msg);

    let scenario: ScenarioName = raw.scenario.parse().map_err(|e: Error| bad("scenario", e.to_string()))?;
    if !(raw.alpha > 1.0 && raw.alpha <= 2.0) {
        return Err(bad("alpha", format!("alpha must be in (1,2], got {}", raw.alpha)));
    }
    if !(raw.epsilon > 0.0 && raw.epsilon <= 1.0) {
        return Err(bad("epsilon", format!("epsilon must be in (0,1], got {}", raw.epsilon)));
    }
    let tau = raw.tau.unwrap_or(DEFAULT_TAU);
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(bad("tau", format!("tau must be positive and finite, got {tau}")));
    }
    let t = match raw.horizon {
        HorizonSpec::T(t) | HorizonSpec::LongTime(t) => t,
    };
    if !(t > 0.0 && t.is_finite()) {
        return Err(bad("horizon", format!("horizon must be positive and finite, got {t}")));
    }
    let variant = match &raw.variant {
        Some(v) => Variant::parse(v).map_err(|e| bad("variant", e.to_string()))?,
        None => scenario.default_variant(),
    };
    if scenario.is_complex() && !variant.is_coupled() {
        return Err(bad(
            "variant",
            format!("{scenario} has complex data and needs a complex or oscillatory variant"),
        ));
    }
    let grid_override = raw.grid_override.unwrap_or_default();
    if !grid_override.is_empty() {
        if grid_override.len() != 1 && grid_override.len() != scenario.dim() {
            return Err(bad(
                "gridOverride",
                format!(
                    "expected 1 or {} point counts, got {}",
                    scenario.dim(),
                    grid_override.len()
                ),
            ));
        }
        if let Some(n) = grid_override.iter().find(|&&n| n < 4 || n % 2 == 1) {
            return Err(bad("gridOverride", format!("point counts must be even and >= 4, got {n}")));
        }
    }
    let config = RunConfig {
        scenario,
        alpha: raw.alpha,
        epsilon: raw.epsilon,
        tau,
        horizon: raw.horizon,
        grid_override,
        variant,
        snapshots: raw.snapshots.unwrap_or_default(),
        outputs: raw.outputs.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUTS)),
    };
    let end = config.horizon_time();
    config
        .steps()
        .map_err(|e| bad("horizon", e.to_string()))?;
    for &s in &config.snapshots {
        if !(0.0..=end).contains(&s) {
            return Err(bad("snapshots", format!("snapshot time {s} lies outside [0, {end}]")));
        }
        step_count(s, tau).map_err(|e| bad("snapshots", e.to_string()))?;
    }
    Ok(config)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text, &path.display().to_string())
}
