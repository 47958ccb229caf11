//! Scenario configuration files.
//!
//! ```toml
//! scenario = "lossy_cavity"
//! tau_list = [0.1]
//! steps = 200
//! outputs = ["eps_disc_sq", "eps_cont_sq"]
//!
//! [params]
//! delta = 0.0
//! big_g = 1.0
//! gamma = 1.0
//! ```
//!
//! Unknown keys are rejected at every level.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Scenario {
    LossyCavity,
    Dephasing,
    Rtn,
    MultiLorentzian,
    GenericCm,
    SdBridge,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::LossyCavity => "lossy_cavity",
            Scenario::Dephasing => "dephasing",
            Scenario::Rtn => "rtn",
            Scenario::MultiLorentzian => "multi_lorentzian",
            Scenario::GenericCm => "generic_cm",
            Scenario::SdBridge => "sd_bridge",
        }
    }

    /// Whether the scenario has a collision time to sweep.
    pub fn sweepable(self) -> bool {
        matches!(
            self,
            Scenario::LossyCavity | Scenario::Dephasing | Scenario::MultiLorentzian
        )
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = crate::error::CliError;

    fn from_str(s: &str) -> Result<Self> {
        toml::Value::String(s.to_string())
            .try_into()
            .map_err(|_| config_err(format!("unknown scenario '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub params: toml::Table,
    /// Collision times; absent means the scenario default.
    pub tau_list: Option<Vec<f64>>,
    pub steps: Option<usize>,
    pub t_max: Option<f64>,
    #[serde(default)]
    pub outputs: Vec<String>,
}

impl ScenarioConfig {
    /// Config with every field at its scenario default.
    pub fn preset(scenario: Scenario) -> Self {
        Self {
            scenario,
            params: toml::Table::new(),
            tau_list: None,
            steps: None,
            t_max: None,
            outputs: Vec::new(),
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// Typed view of `params`.
    pub fn params<T: DeserializeOwned>(&self) -> Result<T> {
        toml::Value::Table(self.params.clone())
            .try_into()
            .map_err(|e: toml::de::Error| config_err(format!("[params] for {}: {}", self.scenario, e.message())))
    }

    /// τ values, falling back to `default` when none were given.
    pub fn taus_or(&self, default: &[f64]) -> Result<Vec<f64>> {
        let taus = self.tau_list.clone().unwrap_or_else(|| default.to_vec());
        if taus.is_empty() {
            return Err(config_err("tau_list must be nonempty"));
        }
        if let Some(bad) = taus.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
            return Err(config_err(format!("tau_list entries must be positive, got {bad}")));
        }
        Ok(taus)
    }

    pub fn steps_or(&self, default: usize) -> Result<usize> {
        match self.steps {
            Some(0) => Err(config_err("steps must be at least 1")),
            Some(n) => Ok(n),
            None => Ok(default),
        }
    }

    pub fn t_max_or(&self, default: f64) -> Result<f64> {
        match self.t_max {
            Some(t) if !(t > 0.0) || !t.is_finite() => Err(config_err(format!("t_max must be positive, got {t}"))),
            Some(t) => Ok(t),
            None => Ok(default),
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossyCavityConfig {
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "one")]
    pub big_g: f64,
    /// Target γ = g²τ; defaults to G.
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DephasingConfig {
    #[serde(default = "one")]
    pub big_g: f64,
    #[serde(default = "default_dephasing_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub xi_bias: f64,
}

fn default_dephasing_gamma() -> f64 {
    3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RtnConfig {
    #[serde(default = "one")]
    pub v: f64,
    #[serde(default = "default_tc")]
    pub t_c: f64,
}

fn default_tc() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseName {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiLorentzianConfig {
    #[serde(default)]
    pub delta1: f64,
    #[serde(default)]
    pub delta2: f64,
    #[serde(default = "one")]
    pub big_g1: f64,
    #[serde(default)]
    pub big_g2: f64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_gamma1")]
    pub gamma1: f64,
    #[serde(default = "one")]
    pub gamma2: f64,
    /// Adds the equivalent-spectral-density column for this case.
    pub case: Option<CaseName>,
    #[serde(default)]
    pub omega0: f64,
}

fn default_c() -> f64 {
    0.5
}

fn default_gamma1() -> f64 {
    4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKind {
    /// σ₋σ₊ + σ₊σ₋
    Exchange,
    /// σ_z σ_x
    Dephasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Excited,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericCmConfig {
    /// H_S = (ω/2) σ_z
    #[serde(default = "one")]
    pub omega: f64,
    #[serde(default = "one")]
    pub g: f64,
    /// Ancilla bias, 1 is the ground state.
    #[serde(default = "one")]
    pub xi: f64,
    #[serde(default = "default_coupling")]
    pub coupling: CouplingKind,
    #[serde(default = "default_initial")]
    pub initial: InitialState,
}

fn default_coupling() -> CouplingKind {
    CouplingKind::Exchange
}

fn default_initial() -> InitialState {
    InitialState::Excited
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BridgePreset {
    LorentzianDecay,
    DephasingSeries,
    MultiLorentzianA,
    MultiLorentzianB,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdBridgeConfig {
    #[serde(default = "default_preset")]
    pub preset: BridgePreset,
    /// Use G² = Γ₀κ/2 instead of Γ₀κ/4 in the Lorentzian map.
    #[serde(default)]
    pub kernel_matched: bool,
}

fn default_preset() -> BridgePreset {
    BridgePreset::LorentzianDecay
}
