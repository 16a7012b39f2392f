//! Run configuration read from a TOML file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::field::FieldProfile;
use crate::scattering::ScatteringOptions;
use crate::spectral::{FlatnessOptions, SliceOptions};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Plotdata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub profile: FieldProfile,
    /// Grid policy and solver tolerances shared by all commands.
    #[serde(default)]
    pub grid: SliceOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<SliceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flatband: Option<FlatbandConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub harmonic: Option<HarmonicConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asymptotics: Option<AsymptoticsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scattering: Option<ScatteringConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agmon: Option<AgmonConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceConfig {
    pub xi: f64,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub xi_min: f64,
    pub xi_max: f64,
    pub samples: usize,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatbandConfig {
    pub lambdas: Vec<f64>,
    #[serde(default = "default_flat_k_max")]
    pub k_max: usize,
    #[serde(default)]
    pub options: FlatnessOptions,
}

/// `η` is either fixed or a fraction of the essential threshold at each `θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicConfig {
    pub thetas: Vec<f64>,
    pub hs: Vec<f64>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default = "default_eta_fraction")]
    pub eta_fraction: f64,
    /// θ-window for `v±`; the default window is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(default = "yes")]
    pub agmon: bool,
    #[serde(default = "default_decay_bound")]
    pub decay_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticsConfig {
    /// `log₁₀ ξ` of the samples.
    pub xi_decades: Vec<f64>,
    pub n: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringConfig {
    pub xi: f64,
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub options: ScatteringOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgmonConfig {
    pub thetas: Vec<f64>,
    pub hs: Vec<f64>,
    #[serde(default = "default_agmon_n_max")]
    pub n_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default = "default_agmon_fraction")]
    pub eta_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    /// Weight slope; taken from the decay-rate scan when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default = "default_cap")]
    pub cap: f64,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default = "default_decay_bound")]
    pub decay_bound: f64,
    #[serde(default = "yes")]
    pub negative_control: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            path: None,
            formats: default_formats(),
        }
    }
}

fn default_k_max() -> usize {
    10
}
fn default_flat_k_max() -> usize {
    6
}
fn default_n_max() -> usize {
    3
}
fn default_agmon_n_max() -> usize {
    1
}
fn default_eta_fraction() -> f64 {
    0.999_999
}
fn default_agmon_fraction() -> f64 {
    0.5
}
fn default_decay_bound() -> f64 {
    1e4
}
fn default_cap() -> f64 {
    3.0
}
fn default_levels() -> usize {
    3
}
fn default_formats() -> Vec<Format> {
    vec![Format::Json]
}
fn yes() -> bool {
    true
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        check_grid_keys(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |path: &str, msg: &str| Err(CliError::Config(format!("{path}: {msg}")));
        self.grid
            .validate()
            .map_err(|e| CliError::Config(format!("grid: {e}")))?;
        if self.output.formats.is_empty() {
            return bad("output.formats", "must not be empty");
        }
        if let Some(s) = &self.slice {
            if !s.xi.is_finite() {
                return bad("slice.xi", "must be finite");
            }
            if s.k_max == 0 {
                return bad("slice.k_max", "must be >= 1");
            }
        }
        if let Some(s) = &self.sweep {
            if s.samples < 2 {
                return bad("sweep.samples", "must be >= 2");
            }
            if !(s.xi_min.is_finite() && s.xi_max.is_finite() && s.xi_min < s.xi_max) {
                return bad("sweep", "need finite xi_min < xi_max");
            }
            if s.k_max == 0 {
                return bad("sweep.k_max", "must be >= 1");
            }
        }
        if let Some(f) = &self.flatband {
            if f.lambdas.is_empty() || f.lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
                return bad("flatband.lambdas", "need a non-empty list of positive values");
            }
            if f.k_max == 0 {
                return bad("flatband.k_max", "must be >= 1");
            }
            f.options
                .validate()
                .map_err(|e| CliError::Config(format!("flatband.options: {e}")))?;
        }
        if let Some(h) = &self.harmonic {
            check_grid(
                "harmonic",
                &h.thetas,
                &h.hs,
                h.n_max,
                h.eta,
                h.eta_fraction,
                h.window,
            )?;
            if !(h.decay_bound > 0.0) {
                return bad("harmonic.decay_bound", "must be positive");
            }
        }
        if let Some(a) = &self.asymptotics {
            if a.xi_decades.len() < 2 || a.xi_decades.iter().any(|d| !d.is_finite()) {
                return bad("asymptotics.xi_decades", "need at least two finite values");
            }
            if a.n.is_empty() || a.n.contains(&0) {
                return bad("asymptotics.n", "need a non-empty list of band indices >= 1");
            }
        }
        if let Some(s) = &self.scattering {
            if !s.xi.is_finite() {
                return bad("scattering.xi", "must be finite");
            }
            if s.lambdas.is_empty() || s.lambdas.iter().any(|l| !l.is_finite()) {
                return bad("scattering.lambdas", "need a non-empty list of finite values");
            }
            s.options
                .validate()
                .map_err(|e| CliError::Config(format!("scattering.options: {e}")))?;
        }
        if let Some(a) = &self.agmon {
            check_grid(
                "agmon",
                &a.thetas,
                &a.hs,
                a.n_max,
                a.eta,
                a.eta_fraction,
                a.window,
            )?;
            if a.levels < 2 {
                return bad("agmon.levels", "must be >= 2");
            }
            if !(a.cap >= 0.0 && a.cap.is_finite()) {
                return bad("agmon.cap", "must be finite and >= 0");
            }
            if a.gamma.is_some_and(|g| !(g >= 0.0 && g.is_finite())) {
                return bad("agmon.gamma", "must be finite and >= 0");
            }
            if !(a.decay_bound > 0.0) {
                return bad("agmon.decay_bound", "must be positive");
            }
        }
        Ok(())
    }
}

/// `[grid]` mixes flattened option structs, which serde cannot check for
/// unknown keys, so they are checked here against the serialized defaults.
fn check_grid_keys(text: &str) -> Result<(), CliError> {
    let raw: toml::Table = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let Some(grid) = raw.get("grid").and_then(|g| g.as_table()) else {
        return Ok(());
    };
    let known = serde_json::to_value(SliceOptions::default()).map_err(|e| CliError::Config(e.to_string()))?;
    let known = known.as_object().expect("options serialize to a map");
    for key in grid.keys() {
        if !known.contains_key(key) {
            let mut names: Vec<&String> = known.keys().collect();
            names.sort();
            return Err(CliError::Config(format!(
                "grid.{key}: unknown field, expected one of {}",
                names.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
            )));
        }
    }
    Ok(())
}

fn check_grid(
    name: &str,
    thetas: &[f64],
    hs: &[f64],
    n_max: usize,
    eta: Option<f64>,
    fraction: f64,
    window: Option<[f64; 2]>,
) -> Result<(), CliError> {
    let bad = |field: &str, msg: &str| Err(CliError::Config(format!("{name}.{field}: {msg}")));
    if thetas.is_empty() || thetas.iter().any(|t| !t.is_finite()) {
        return bad("thetas", "need a non-empty list of finite values");
    }
    if hs.is_empty() || hs.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
        return bad("hs", "need a non-empty list of positive values");
    }
    if n_max == 0 {
        return bad("n_max", "must be >= 1");
    }
    if eta.is_some_and(|e| !(e > 0.0 && e.is_finite())) {
        return bad("eta", "must be positive");
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return bad("eta_fraction", "must lie in (0, 1)");
    }
    if window.is_some_and(|[a, b]| !(a.is_finite() && b.is_finite() && a <= b)) {
        return bad("window", "need finite [lo, hi] with lo <= hi");
    }
    Ok(())
}
