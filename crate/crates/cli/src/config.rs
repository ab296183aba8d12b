//! TOML run and sweep configurations with field-level error paths.

use daqc_core::channels::NoiseConfig;
use daqc_core::model::HHParams;
use daqc_core::presets::{BENCHMARK_STEPS, BENCHMARK_TIME, HALF_FILLING};
use daqc_core::{Error, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

fn config_error(path: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Config {
        path: path.into(),
        reason: reason.into(),
    }
}

/// Deserializes TOML, reporting the dotted path of the offending field.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = toml::Deserializer::new(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        config_error(if path == "." { String::new() } else { path }, e.inner().message().trim())
    })
}

/// Which kind of file a config is, read from its optional top-level `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfigKind {
    #[default]
    Run,
    Sweep,
}

/// Reads only the `kind` key of a config file.
pub fn config_kind(text: &str) -> Result<ConfigKind> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| config_error("", e.message().trim()))?;
    match table.get("kind") {
        None => Ok(ConfigKind::Run),
        Some(v) => ConfigKind::deserialize(v.clone()).map_err(|e| config_error("kind", e.message().trim())),
    }
}

fn check_kind(found: ConfigKind, expected: ConfigKind) -> Result<()> {
    if found != expected {
        return Err(config_error("kind", format!("expected {expected:?}, found {found:?}").to_lowercase()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evolution {
    Exact,
    Daqc,
    Digital,
}

fn default_k() -> f64 {
    1.0
}
fn default_rows() -> usize {
    1
}
fn default_cols() -> usize {
    2
}
fn default_levels() -> usize {
    8
}

/// Model parameters. Only `omega0` is required; the rest default to a
/// two-site chain with `k = 1`, `U = g = 0` and 8-level modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub omega0: f64,
    #[serde(default)]
    pub u: f64,
    #[serde(default = "default_k")]
    pub k: f64,
    #[serde(default)]
    pub g: f64,
    #[serde(default = "default_rows")]
    pub rows: usize,
    #[serde(default = "default_cols")]
    pub cols: usize,
    #[serde(default = "default_levels")]
    pub boson_levels: usize,
}

impl ModelConfig {
    pub fn params(&self) -> HHParams {
        HHParams {
            omega0: self.omega0,
            u: self.u,
            k: self.k,
            g: self.g,
            rows: self.rows,
            cols: self.cols,
            boson_levels: self.boson_levels,
        }
    }

    fn validate(&self) -> Result<()> {
        self.params().validate().map_err(|e| match e {
            Error::InvalidParameter { name, reason } => config_error(format!("model.{name}"), reason),
            Error::TooFewLevels(_) => config_error("model.boson_levels", e.to_string()),
            other => config_error("model", other.to_string()),
        })
    }
}

fn validate_common(
    model: &ModelConfig,
    evolution: Evolution,
    steps: usize,
    t_final: f64,
    initial_state: &[usize],
    output: &str,
) -> Result<()> {
    model.validate()?;
    if steps == 0 {
        return Err(config_error("steps", "need at least one step"));
    }
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(config_error("t_final", "must be finite and non-negative"));
    }
    let p = model.params();
    let n_qubits = p.n_qubits();
    if initial_state.len() != n_qubits + p.n_sites() {
        return Err(config_error(
            "initial_state",
            format!(
                "expected {} digits ({} qubits then {} modes), found {}",
                n_qubits + p.n_sites(),
                n_qubits,
                p.n_sites(),
                initial_state.len()
            ),
        ));
    }
    for (i, &d) in initial_state.iter().enumerate() {
        let limit = if i < n_qubits { 2 } else { p.boson_levels };
        if d >= limit {
            return Err(config_error(format!("initial_state[{i}]"), format!("digit {d} must be below {limit}")));
        }
    }
    if evolution == Evolution::Digital && !p.boson_levels.is_power_of_two() {
        return Err(config_error(
            "model.boson_levels",
            "digital evolution stores modes in binary and needs a power of two",
        ));
    }
    if output.is_empty() || output.contains(['/', '\\']) {
        return Err(config_error("output", "must be a plain file stem"));
    }
    Ok(())
}

fn default_evolution() -> Evolution {
    Evolution::Daqc
}
fn default_steps() -> usize {
    BENCHMARK_STEPS
}
fn default_t_final() -> f64 {
    BENCHMARK_TIME
}
fn default_initial_state() -> Vec<usize> {
    HALF_FILLING.to_vec()
}
fn default_run_output() -> String {
    "run".into()
}
fn default_sweep_output() -> String {
    "sweep".into()
}

/// One time-resolved simulation.
///
/// Trotterized evolutions record every step; exact evolution is sampled at
/// `samples + 1` uniform times (default: one per step).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub kind: ConfigKind,
    pub model: ModelConfig,
    #[serde(default = "default_evolution")]
    pub evolution: Evolution,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default)]
    pub samples: Option<usize>,
    /// Qubit digits followed by Fock levels.
    #[serde(default = "default_initial_state")]
    pub initial_state: Vec<usize>,
    /// Recorded in the manifest; every algorithm here is deterministic.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_run_output")]
    pub output: String,
    #[serde(default)]
    pub noise: Option<NoiseConfig>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = parse(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_kind(self.kind, ConfigKind::Run)?;
        validate_common(
            &self.model,
            self.evolution,
            self.steps,
            self.t_final,
            &self.initial_state,
            &self.output,
        )?;
        if self.samples == Some(0) {
            return Err(config_error("samples", "need at least one sample"));
        }
        if self.samples.is_some() && self.evolution != Evolution::Exact {
            return Err(config_error("samples", "only exact evolution takes a sample count"));
        }
        if let Some(noise) = &self.noise {
            if self.evolution == Evolution::Exact {
                return Err(config_error("noise", "exact evolution is noiseless"));
            }
            noise.validate().map_err(|e| match e {
                Error::InvalidParameter { name, reason } => config_error(format!("noise.{name}"), reason),
                other => config_error("noise", other.to_string()),
            })?;
        }
        Ok(())
    }

    pub fn params(&self) -> HHParams {
        self.model.params()
    }
}

/// Model parameter that a sweep axis varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    U,
    G,
    K,
    Omega0,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::U => "u",
            SweepParam::G => "g",
            SweepParam::K => "k",
            SweepParam::Omega0 => "omega0",
        }
    }

    pub fn set(self, model: &mut ModelConfig, value: f64) {
        match self {
            SweepParam::U => model.u = value,
            SweepParam::G => model.g = value,
            SweepParam::K => model.k = value,
            SweepParam::Omega0 => model.omega0 = value,
        }
    }
}

/// `points` uniform values from `start` to `stop`; a zero-width range
/// collapses to one value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.start == self.stop || self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / last)
            .collect()
    }

    fn validate(&self, path: &str) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(config_error(format!("{path}.start"), "range must be finite"));
        }
        if self.points == 0 {
            return Err(config_error(format!("{path}.points"), "need at least one point"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    FinalFidelity,
    MinFidelity,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::FinalFidelity => "final_fidelity",
            Metric::MinFidelity => "min_fidelity",
        }
    }
}

fn default_axis1() -> Axis {
    Axis {
        param: SweepParam::U,
        start: 0.0,
        stop: 10.0,
        points: 21,
    }
}
fn default_axis2() -> Axis {
    Axis {
        param: SweepParam::G,
        start: 0.0,
        stop: 5.0,
        points: 21,
    }
}
fn default_metric() -> Metric {
    Metric::FinalFidelity
}

/// Two-parameter fidelity map; every cell is an independent run against
/// exact evolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub kind: ConfigKind,
    /// Fixed parameters; the swept ones are overwritten per cell.
    pub model: ModelConfig,
    #[serde(default = "default_evolution")]
    pub evolution: Evolution,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default = "default_initial_state")]
    pub initial_state: Vec<usize>,
    #[serde(default = "default_metric")]
    pub metric: Metric,
    #[serde(default = "default_axis1")]
    pub axis1: Axis,
    #[serde(default = "default_axis2")]
    pub axis2: Axis,
    #[serde(default = "default_sweep_output")]
    pub output: String,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = parse(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_kind(self.kind, ConfigKind::Sweep)?;
        self.axis1.validate("axis1")?;
        self.axis2.validate("axis2")?;
        if self.axis1.param == self.axis2.param {
            return Err(config_error("axis2.param", "axes must vary different parameters"));
        }
        if self.evolution == Evolution::Exact {
            return Err(config_error("evolution", "a sweep compares a Trotterized evolution to exact"));
        }
        for (a1, a2) in [
            (self.axis1.start, self.axis2.start),
            (self.axis1.stop, self.axis2.stop),
        ] {
            validate_common(
                &self.cell_model(a1, a2),
                self.evolution,
                self.steps,
                self.t_final,
                &self.initial_state,
                &self.output,
            )?;
        }
        Ok(())
    }

    /// Model of the cell at `(v1, v2)` on the two axes.
    pub fn cell_model(&self, v1: f64, v2: f64) -> ModelConfig {
        let mut m = self.model;
        self.axis1.param.set(&mut m, v1);
        self.axis2.param.set(&mut m, v2);
        m
    }
}
