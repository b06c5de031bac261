//! Run configuration: one JSON document, every field optional.

use std::path::Path;

use hexbeam::engine::{default_eta_grid, default_thresholds, NetworkConfig, Scenario};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<String>,
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// site by site over the scenario's rings
    #[default]
    Rings,
    /// infinite lattice through the power series (2D only)
    Series,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpectedIsrConfig {
    /// mobile distance over the inter-site distance
    pub x: f64,
    pub bearing_deg: f64,
    pub route: Route,
}

impl Default for ExpectedIsrConfig {
    fn default() -> Self {
        Self {
            x: 0.3,
            bearing_deg: 60.0,
            route: Route::Rings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PatternDumpConfig {
    pub step_deg: f64,
}

impl Default for PatternDumpConfig {
    fn default() -> Self {
        Self { step_deg: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub network: NetworkConfig,
    pub scenario: Scenario,
    /// scenarios for `compare`; empty means 3D against 2D at the main
    /// scenario's beam widths
    pub compare: Vec<Scenario>,
    pub thresholds_db: Vec<f64>,
    pub eta_grid: Vec<f64>,
    pub expected_isr: ExpectedIsrConfig,
    pub pattern_dump: PatternDumpConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            network: NetworkConfig::default(),
            scenario: Scenario::default(),
            compare: Vec::new(),
            thresholds_db: default_thresholds(),
            eta_grid: default_eta_grid(),
            expected_isr: ExpectedIsrConfig::default(),
            pattern_dump: PatternDumpConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

fn invalid(field: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {reason}"))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let lift = |prefix: &str, e: hexbeam::Error| match e {
            hexbeam::Error::Domain { name, reason } if !name.contains('.') => invalid(&format!("{prefix}.{name}"), reason),
            other => CliError::Config(other.to_string()),
        };
        self.network.channel.validate().map_err(|e| lift("network.channel", e))?;
        self.network.mimo.validate().map_err(|e| lift("network.mimo", e))?;
        self.network.validate().map_err(|e| lift("network", e))?;
        self.scenario.validate().map_err(|e| lift("scenario", e))?;
        for (i, s) in self.compare.iter().enumerate() {
            s.validate().map_err(|e| invalid(&format!("compare[{i}]"), e))?;
        }
        if self.thresholds_db.is_empty() || self.thresholds_db.iter().any(|t| !t.is_finite()) {
            return Err(invalid("thresholds_db", "need at least one finite threshold"));
        }
        if self.eta_grid.is_empty() || self.eta_grid.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return Err(invalid("eta_grid", "every load must lie in [0, 1]"));
        }
        let x = self.expected_isr.x;
        if !(x > 0.0 && x < 1.0) {
            return Err(invalid("expected_isr.x", format!("must lie in (0, 1), got {x}")));
        }
        if !self.expected_isr.bearing_deg.is_finite() {
            return Err(invalid("expected_isr.bearing_deg", "must be finite"));
        }
        let step = self.pattern_dump.step_deg;
        if !(step > 0.0 && step <= 90.0) {
            return Err(invalid("pattern_dump.step_deg", format!("must lie in (0, 90], got {step}")));
        }
        Ok(())
    }

    /// SHA-256 of the compact JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    RunConfig::from_json(&text)
}
