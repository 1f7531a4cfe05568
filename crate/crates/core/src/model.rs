//! Model parameters, probe placement and time grids.
//!
//! Every backend works in natural units: `ħ = 1`, the hopping `J` is the
//! unit of energy and the lattice constant `a` the unit of length. Energies
//! (`U`, `μ`, `η`) are given as multiples of `J`, inverse temperatures as
//! multiples of `1/J` and times as multiples of `ħ/J`. The physical values of
//! `J` and `a` are carried alongside as [`Units`] so that a validated
//! [`Config`] can be turned back into the original inputs without loss.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    GroundState,
    Thermal,
}

/// Initial state of the host: its ground state or a canonical ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSpec {
    pub kind: EquilibriumKind,
    /// Inverse temperature `βJ`; required when `kind` is thermal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl EquilibriumSpec {
    pub fn ground_state() -> Self {
        Self { kind: EquilibriumKind::GroundState, beta: None }
    }

    pub fn thermal(beta: f64) -> Self {
        Self { kind: EquilibriumKind::Thermal, beta: Some(beta) }
    }

    /// `None` stands for the zero-temperature limit.
    pub fn inverse_temperature(&self) -> Option<f64> {
        match self.kind {
            EquilibriumKind::GroundState => None,
            EquilibriumKind::Thermal => self.beta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == EquilibriumKind::Thermal {
            match self.beta {
                Some(b) if b.is_finite() && b > 0.0 => {}
                _ => return Err(Error::MissingInverseTemperature),
            }
        }
        Ok(())
    }
}

impl Default for EquilibriumSpec {
    fn default() -> Self {
        Self::ground_state()
    }
}

/// Bose-Hubbard lattice, filling and equilibrium specification.
///
/// `interaction` and `chemical_potential` are in units of `hopping`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub num_sites: usize,
    pub num_particles: usize,
    /// Physical value of the hopping `J`; sets the energy unit.
    pub hopping: f64,
    /// `U/J`.
    pub interaction: f64,
    /// `μ/J`, entering as `+μ Σ n̂_i`.
    pub chemical_potential: f64,
    /// Physical lattice constant `a`; sets the length unit.
    pub lattice_constant: f64,
    pub boundary: Boundary,
    pub equilibrium: EquilibriumSpec,
}

impl ModelSpec {
    /// Unit filling, periodic ring, ground state, `J = a = 1`.
    pub fn new(num_sites: usize, num_particles: usize, interaction: f64) -> Self {
        Self {
            num_sites,
            num_particles,
            hopping: 1.0,
            interaction,
            chemical_potential: 0.0,
            lattice_constant: 1.0,
            boundary: Boundary::Periodic,
            equilibrium: EquilibriumSpec::ground_state(),
        }
    }

    pub fn with_equilibrium(mut self, equilibrium: EquilibriumSpec) -> Self {
        self.equilibrium = equilibrium;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_chemical_potential(mut self, mu: f64) -> Self {
        self.chemical_potential = mu;
        self
    }

    /// `ρ̄ = N/M`.
    pub fn mean_density(&self) -> f64 {
        self.num_particles as f64 / self.num_sites as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_sites < 2 {
            return Err(Error::invalid("num_sites", format!("need at least 2 sites, got {}", self.num_sites)));
        }
        if self.num_particles < 1 {
            return Err(Error::invalid("num_particles", "need at least one boson"));
        }
        positive_finite("hopping", self.hopping)?;
        positive_finite("lattice_constant", self.lattice_constant)?;
        if !self.interaction.is_finite() || self.interaction < 0.0 {
            return Err(Error::invalid("interaction", format!("U/J must be finite and >= 0, got {}", self.interaction)));
        }
        if !self.chemical_potential.is_finite() {
            return Err(Error::invalid("chemical_potential", "must be finite"));
        }
        self.equilibrium.validate()
    }
}

fn positive_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

/// Placement and coupling of the two probe qubits.
///
/// The level splitting between `|00⟩` and `|11⟩` is fixed to zero and is
/// not represented.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeLayout {
    pub site_left: usize,
    /// `Δc = j_R − j_L` in lattice units.
    pub separation: usize,
    /// `η/J`, identical for both probes.
    pub coupling: f64,
}

impl ProbeLayout {
    pub fn new(separation: usize, coupling: f64) -> Self {
        Self { site_left: 0, separation, coupling }
    }

    pub fn site_right(&self, num_sites: usize) -> usize {
        (self.site_left + self.separation) % num_sites
    }

    /// Per-site energy added by probes in state `|0⟩`. Coincident probes
    /// accumulate to `2η` on one site.
    pub fn onsite_shifts(&self, num_sites: usize) -> Vec<f64> {
        let mut shifts = vec![0.0; num_sites];
        shifts[self.site_left % num_sites] += self.coupling;
        shifts[self.site_right(num_sites)] += self.coupling;
        shifts
    }

    pub fn validate(&self, model: &ModelSpec) -> Result<()> {
        let m = model.num_sites;
        if self.separation >= m {
            return Err(Error::SeparationOutOfRange { separation: self.separation, sites: m });
        }
        if self.site_left >= m {
            return Err(Error::invalid("site_left", format!("site {} outside lattice of {m}", self.site_left)));
        }
        if model.boundary == Boundary::Open && self.site_left + self.separation >= m {
            return Err(Error::SeparationOutOfRange { separation: self.separation, sites: m - self.site_left });
        }
        if !self.coupling.is_finite() {
            return Err(Error::invalid("coupling", "η must be finite"));
        }
        Ok(())
    }
}

/// Sampling times `t_r = r·Δt`, `r = 0..=R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub step: f64,
    pub count: usize,
}

impl TimeGrid {
    pub fn new(step: f64, count: usize) -> Result<Self> {
        let grid = Self { step, count };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        positive_finite("grid.step", self.step)?;
        if self.count < 1 {
            return Err(Error::invalid("grid.count", "need at least one step"));
        }
        Ok(())
    }

    pub fn time(&self, r: usize) -> f64 {
        r as f64 * self.step
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.count).map(|r| self.time(r)).collect()
    }

    pub fn len(&self) -> usize {
        self.count + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { step: 0.01, count: 20 }
    }
}

/// Physical scales removed by normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub energy: f64,
    pub length: f64,
}

/// A validated model and probe pair in natural units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub model: ModelSpec,
    pub probes: ProbeLayout,
    pub units: Units,
}

impl Config {
    /// Restores the inputs that produced this configuration.
    pub fn to_physical(&self) -> (ModelSpec, ProbeLayout) {
        let mut model = self.model.clone();
        model.hopping = self.units.energy;
        model.lattice_constant = self.units.length;
        (model, self.probes)
    }

    /// Converts a time in `ħ/J` to physical units (with `ħ = 1`).
    pub fn physical_time(&self, t: f64) -> f64 {
        t / self.units.energy
    }
}

/// Checks a model/probe pair and moves it to natural units.
pub fn validate(spec: &ModelSpec, probes: &ProbeLayout) -> Result<Config> {
    spec.validate()?;
    probes.validate(spec)?;
    let units = Units { energy: spec.hopping, length: spec.lattice_constant };
    let mut model = spec.clone();
    model.hopping = 1.0;
    model.lattice_constant = 1.0;
    Ok(Config { model, probes: *probes, units })
}
