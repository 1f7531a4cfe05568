//! JSON run configuration.
//!
//! Unknown keys are rejected in every section. A run manifest is accepted in
//! place of a configuration; its `config` snapshot is used.

use std::fs;
use std::path::Path;

use qprobe_core::exact::DEFAULT_CAP;
use qprobe_core::protocol::{Backend, FitOptions, NoiseSpec};
use qprobe_core::{Boundary, EquilibriumKind, EquilibriumSpec, ModelSpec, ProbeLayout, TimeGrid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub probes: ProbeSection,
    #[serde(default)]
    pub equilibrium: EquilibriumSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    #[serde(default)]
    pub fit: FitOptions,
    /// Backend used by the `protocol` subcommand.
    #[serde(default)]
    pub backend: BackendChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub num_sites: usize,
    pub num_particles: usize,
    #[serde(default = "unit")]
    pub hopping: f64,
    /// `U/J`.
    pub interaction: f64,
    /// `μ/J`.
    #[serde(default)]
    pub chemical_potential: f64,
    #[serde(default = "unit")]
    pub lattice_constant: f64,
    #[serde(default)]
    pub boundary: Boundary,
    /// Fock occupation cap for the exact backend.
    #[serde(default = "default_cap")]
    pub max_occupancy: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    pub separations: Vec<usize>,
    /// `η/J`.
    pub coupling: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriumSection {
    pub kind: EquilibriumKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl Default for EquilibriumSection {
    fn default() -> Self {
        Self { kind: EquilibriumKind::GroundState, beta: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_count")]
    pub count: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { step: default_step(), count: default_count() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_interactions")]
    pub interactions: Vec<f64>,
    #[serde(default = "default_caps")]
    pub max_occupancies: Vec<usize>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self { interactions: default_interactions(), max_occupancies: default_caps() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    #[default]
    Bogoliubov,
    Exact,
}

impl BackendChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            BackendChoice::Bogoliubov => "bogoliubov",
            BackendChoice::Exact => "exact",
        }
    }
}

fn unit() -> f64 {
    1.0
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

fn default_step() -> f64 {
    0.01
}

fn default_count() -> usize {
    20
}

fn default_interactions() -> Vec<f64> {
    vec![1.0, 3.0, 10.0, 30.0, 100.0]
}

fn default_caps() -> Vec<usize> {
    vec![3, 4, 5]
}

/// Model, probes and grid after validation, in units of `J` and `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub spec: ModelSpec,
    pub probes: Vec<ProbeLayout>,
    pub grid: TimeGrid,
}

impl RunConfig {
    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        let schema = |source| CliError::Schema { path: path.to_path_buf(), source };
        let value: serde_json::Value = serde_json::from_str(text).map_err(schema)?;
        if value.get("schema_version").is_some() {
            let manifest: RunManifest = serde_json::from_value(value).map_err(schema)?;
            return Ok(manifest.config);
        }
        serde_json::from_value(value).map_err(schema)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, path)
    }

    pub fn model_spec(&self) -> ModelSpec {
        let m = &self.model;
        ModelSpec {
            num_sites: m.num_sites,
            num_particles: m.num_particles,
            hopping: m.hopping,
            interaction: m.interaction,
            chemical_potential: m.chemical_potential,
            lattice_constant: m.lattice_constant,
            boundary: m.boundary,
            equilibrium: EquilibriumSpec { kind: self.equilibrium.kind, beta: self.equilibrium.beta },
        }
    }

    pub fn backend(&self) -> Backend {
        match self.backend {
            BackendChoice::Bogoliubov => Backend::Bogoliubov,
            BackendChoice::Exact => Backend::Exact { max_occupancy: self.model.max_occupancy },
        }
    }

    pub fn resolve(&self) -> Result<Resolved> {
        if self.probes.separations.is_empty() {
            return Err(CliError::Config("probes.separations is empty".into()));
        }
        if let Some(noise) = &self.noise {
            noise.validate()?;
        }
        if let Some(sweep) = &self.sweep {
            if sweep.interactions.is_empty() || sweep.max_occupancies.is_empty() {
                return Err(CliError::Config("sweep lists must not be empty".into()));
            }
        }
        let spec = self.model_spec();
        let mut normalized = None;
        let mut probes = Vec::with_capacity(self.probes.separations.len());
        for &dc in &self.probes.separations {
            let cfg = qprobe_core::validate(&spec, &ProbeLayout::new(dc, self.probes.coupling))?;
            probes.push(cfg.probes);
            normalized.get_or_insert(cfg.model);
        }
        let grid = TimeGrid::new(self.grid.step, self.grid.count)?;
        Ok(Resolved { spec: normalized.expect("at least one separation"), probes, grid })
    }

    pub fn seed(&self) -> Option<u64> {
        self.noise.map(|n| n.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "model": {"num_sites": 8, "num_particles": 8, "interaction": 3.0},
        "probes": {"separations": [0, 1], "coupling": 1.0}
    }"#;

    #[test]
    fn defaults_fill_optional_sections() {
        let cfg = RunConfig::from_json(MINIMAL, Path::new("x.json")).unwrap();
        assert_eq!(cfg.model.max_occupancy, 4);
        assert_eq!(cfg.grid, GridSection { step: 0.01, count: 20 });
        assert_eq!(cfg.backend, BackendChoice::Bogoliubov);
        assert!(cfg.noise.is_none());
        let r = cfg.resolve().unwrap();
        assert_eq!(r.spec.hopping, 1.0);
        assert_eq!(r.probes.len(), 2);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.replace("\"interaction\"", "\"interacton\": 1, \"interaction\"");
        assert!(matches!(RunConfig::from_json(&text, Path::new("x.json")), Err(CliError::Schema { .. })));
        let text = MINIMAL.replace("\"coupling\"", "\"site_left\": 0, \"coupling\"");
        assert!(RunConfig::from_json(&text, Path::new("x.json")).is_err());
    }

    #[test]
    fn thermal_without_beta_fails_validation() {
        let text = MINIMAL.replacen('{', r#"{"equilibrium": {"kind": "thermal"},"#, 1);
        let cfg = RunConfig::from_json(&text, Path::new("x.json")).unwrap();
        let err = cfg.resolve().unwrap_err();
        assert!(matches!(err, CliError::Compute(qprobe_core::Error::MissingInverseTemperature)));
    }

    #[test]
    fn hopping_sets_the_energy_unit() {
        let text = MINIMAL.replace("\"interaction\"", "\"hopping\": 2.5, \"interaction\"");
        let r = RunConfig::from_json(&text, Path::new("x.json")).unwrap().resolve().unwrap();
        assert_eq!(r.spec.hopping, 1.0);
        assert_eq!(r.spec.interaction, 3.0);
    }
}
