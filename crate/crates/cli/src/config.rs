//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "sites": 4, "g_xy": 1.0, "boundary": "open",
//!   "disorder_bound": 1.0, "seed": 7, "realizations": 100,
//!   "initial_state": "neel", "dt": 0.05, "n_steps": 200,
//!   "scheme": "optimized2", "mode": "exact",
//!   "noise": { "p2": 0.01, "p1": 0.0 }
//! }
//! ```
//!
//! Every field is optional; see [`ExperimentConfig::default`].

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spinchain_core::chain::MAX_EXACT_SITES;
use spinchain_core::gates::MAX_DENSITY_QUBITS;
use spinchain_core::{Boundary, InitialState, NoiseModel, SchemeKind};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config field `{field}`: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
    #[error("cannot parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryName {
    Open,
    Closed,
}

impl From<BoundaryName> for Boundary {
    fn from(b: BoundaryName) -> Self {
        match b {
            BoundaryName::Open => Boundary::Open,
            BoundaryName::Closed => Boundary::Closed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    Naive4,
    Optimized2,
}

impl From<SchemeName> for SchemeKind {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::Naive4 => SchemeKind::Naive4Cnot,
            SchemeName::Optimized2 => SchemeKind::Optimized2Cnot,
        }
    }
}

/// Which evolution supplies the probability columns (and the sweep series).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Noiseless Trotter circuit.
    Ideal,
    /// Exact propagator.
    Exact,
    /// Trotter circuit with gate noise, density-matrix channel.
    Density,
    /// Trotter circuit with gate noise, Pauli-error trajectories.
    Trajectories,
}

impl Mode {
    pub fn is_noisy(self) -> bool {
        matches!(self, Mode::Density | Mode::Trajectories)
    }
}

/// `"neel"`, `"domain_wall"`, or a literal bitstring such as `"1100"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct InitialStateName(pub InitialState);

impl TryFrom<String> for InitialStateName {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        match s.as_str() {
            "neel" => Ok(Self(InitialState::Neel)),
            "domain_wall" => Ok(Self(InitialState::DomainWall)),
            bits if !bits.is_empty() && bits.chars().all(|c| c == '0' || c == '1') => {
                Ok(Self(InitialState::Custom(bits.to_string())))
            }
            other => Err(format!(
                "initial_state must be \"neel\", \"domain_wall\" or a bitstring, got {other:?}"
            )),
        }
    }
}

impl From<InitialStateName> for String {
    fn from(s: InitialStateName) -> Self {
        match s.0 {
            InitialState::Neel => "neel".into(),
            InitialState::DomainWall => "domain_wall".into(),
            InitialState::Custom(bits) => bits,
        }
    }
}

impl fmt::Display for InitialStateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from(self.clone()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub p2: f64,
    pub p1: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        let d = NoiseModel::default();
        Self {
            p2: d.p_two_qubit,
            p1: d.p_single_qubit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub sites: usize,
    pub g_xy: f64,
    pub boundary: BoundaryName,
    pub disorder_bound: f64,
    /// Fixed fields; when present no disorder is sampled and a single
    /// realization is run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explicit_fields: Option<Vec<f64>>,
    pub seed: u64,
    pub realizations: usize,
    pub initial_state: InitialStateName,
    pub dt: f64,
    /// Defaults to 200 for `evolve`/`sweep` and 12 for `compare-schemes`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    pub scheme: SchemeName,
    pub mode: Mode,
    pub noise: NoiseConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    /// Trajectory count for `mode = "trajectories"`.
    pub trajectories: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            sites: 4,
            g_xy: 1.0,
            boundary: BoundaryName::Open,
            disorder_bound: 0.0,
            explicit_fields: None,
            seed: 0,
            realizations: 100,
            initial_state: InitialStateName(InitialState::Neel),
            dt: 0.05,
            n_steps: None,
            scheme: SchemeName::Optimized2,
            mode: Mode::Exact,
            noise: NoiseConfig::default(),
            shots: None,
            trajectories: 1000,
        }
    }
}

pub const DEFAULT_EVOLVE_STEPS: usize = 200;
pub const DEFAULT_COMPARE_STEPS: usize = 12;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Realizations actually run: one when the fields are given explicitly.
    pub fn effective_realizations(&self) -> usize {
        if self.explicit_fields.is_some() {
            1
        } else {
            self.realizations
        }
    }

    pub fn noise_model(&self) -> NoiseModel {
        NoiseModel {
            p_two_qubit: self.noise.p2,
            p_single_qubit: self.noise.p1,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let m = self.sites;
        if !(2..=MAX_EXACT_SITES).contains(&m) {
            return Err(invalid(
                "sites",
                format!("must be in 2..={MAX_EXACT_SITES}, got {m}"),
            ));
        }
        if self.boundary == BoundaryName::Closed && m < 3 {
            return Err(invalid("boundary", "a closed chain needs at least 3 sites"));
        }
        if !self.g_xy.is_finite() {
            return Err(invalid("g_xy", "must be finite"));
        }
        if !(self.disorder_bound.is_finite() && self.disorder_bound >= 0.0) {
            return Err(invalid("disorder_bound", "must be finite and >= 0"));
        }
        if let Some(fields) = &self.explicit_fields {
            if fields.len() != m {
                return Err(invalid(
                    "explicit_fields",
                    format!("expected {m} values, got {}", fields.len()),
                ));
            }
            if fields.iter().any(|h| !h.is_finite()) {
                return Err(invalid("explicit_fields", "values must be finite"));
            }
        }
        if self.realizations == 0 {
            return Err(invalid("realizations", "must be >= 1"));
        }
        match &self.initial_state.0 {
            InitialState::DomainWall if !m.is_multiple_of(2) => {
                return Err(invalid(
                    "initial_state",
                    "domain_wall needs an even number of sites",
                ))
            }
            InitialState::Custom(bits) if bits.len() != m => {
                return Err(invalid(
                    "initial_state",
                    format!("bitstring has {} sites, chain has {m}", bits.len()),
                ))
            }
            _ => {}
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid("dt", "must be finite and > 0"));
        }
        for (field, p) in [("noise.p2", self.noise.p2), ("noise.p1", self.noise.p1)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(field, format!("must be in [0, 1], got {p}")));
            }
        }
        if self.mode == Mode::Density && m > MAX_DENSITY_QUBITS {
            return Err(invalid(
                "mode",
                format!("density mode supports at most {MAX_DENSITY_QUBITS} sites"),
            ));
        }
        if self.shots == Some(0) {
            return Err(invalid("shots", "must be >= 1"));
        }
        if self.trajectories == 0 {
            return Err(invalid("trajectories", "must be >= 1"));
        }
        Ok(())
    }
}
