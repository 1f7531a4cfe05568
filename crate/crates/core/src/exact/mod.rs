//! Exact diagonalization of the Bose-Hubbard host in a truncated Fock space.
//!
//! The probes shift the on-site energy of the sites they sit on, so every
//! probe configuration defines a second Hamiltonian `Ĥ₁ = Ĥ₀ + η(n̂_{j_L} + n̂_{j_R})`
//! over the same basis. The coherence function is the Loschmidt echo between
//! the two.

pub mod basis;
pub mod coherence;
pub mod eigen;
pub mod hamiltonian;
pub mod propagate;
pub mod qubits;
pub mod state;

pub use basis::FockBasis;
pub use coherence::{coherence_series_ed, CoherenceEvaluator};
pub use eigen::{dense_spectrum, ground_state, lanczos_ground_state, Spectrum};
pub use hamiltonian::{build_hamiltonian, SparseHamiltonian};
pub use propagate::{propagate, Propagator};
pub use qubits::{two_qubit_rdm, QubitMatrix};
pub use state::{density_pair, densities, exact_correlation, exact_g2, thermal_state, SystemState};

use crate::error::Result;
use crate::model::{Boundary, EquilibriumKind, ModelSpec, ProbeLayout, TimeGrid};
use crate::series::{CoherenceSeries, CorrelationEstimate, Method};

/// Occupation cap used when none is given.
pub const DEFAULT_CAP: usize = 4;

/// Basis and unprobed Hamiltonian for one model, with helpers that build the
/// probed Hamiltonians and observables on demand.
#[derive(Debug, Clone)]
pub struct ExactBackend {
    spec: ModelSpec,
    basis: FockBasis,
    h0: SparseHamiltonian,
}

impl ExactBackend {
    pub fn new(spec: &ModelSpec, cap: usize) -> Result<Self> {
        spec.validate()?;
        let basis = FockBasis::new(spec.num_sites, spec.num_particles, cap)?;
        let h0 = build_hamiltonian(&basis, spec, &vec![0.0; spec.num_sites])?;
        Ok(Self { spec: spec.clone(), basis, h0 })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn hamiltonian(&self) -> &SparseHamiltonian {
        &self.h0
    }

    fn periodic(&self) -> bool {
        self.spec.boundary == Boundary::Periodic
    }

    /// `Ĥ₁` for a probe pair.
    pub fn probed(&self, probes: &ProbeLayout) -> Result<SparseHamiltonian> {
        probes.validate(&self.spec)?;
        build_hamiltonian(&self.basis, &self.spec, &probes.onsite_shifts(self.spec.num_sites))
    }

    /// The equilibrium state named by the spec.
    pub fn equilibrium_state(&self) -> Result<SystemState> {
        match (self.spec.equilibrium.kind, self.spec.equilibrium.inverse_temperature()) {
            (EquilibriumKind::Thermal, Some(beta)) => thermal_state(&self.h0, beta),
            _ => SystemState::ground(&self.h0),
        }
    }

    pub fn coherence_series(&self, state: &SystemState, probes: &ProbeLayout, grid: &TimeGrid) -> Result<CoherenceSeries> {
        let h1 = self.probed(probes)?;
        coherence_series_ed(state, &self.h0, &h1, probes.separation, probes.coupling, grid)
    }

    pub fn correlation(&self, state: &SystemState, separation: usize) -> f64 {
        exact_correlation(&self.basis, state, separation, self.periodic())
    }

    pub fn g2(&self, state: &SystemState, separation: usize) -> f64 {
        exact_g2(&self.basis, state, separation, self.periodic())
    }

    pub fn estimate(&self, state: &SystemState, separation: usize) -> CorrelationEstimate {
        CorrelationEstimate {
            separation,
            cor: self.correlation(state, separation),
            cor_err: 0.0,
            g2: self.g2(state, separation),
            g2_err: 0.0,
            method: Method::Exact,
        }
    }

    /// `(⟨V̂⟩, ⟨V̂²⟩)` for `V̂ = η(n̂_{j_L} + n̂_{j_R})`.
    pub fn interaction_moments(&self, state: &SystemState, probes: &ProbeLayout) -> (f64, f64) {
        state::linear_density_moments(&self.basis, state, &probes.onsite_shifts(self.spec.num_sites))
    }

    pub fn rdm(&self, state: &SystemState, probes: &ProbeLayout, t: f64) -> Result<QubitMatrix> {
        let h1 = self.probed(probes)?;
        two_qubit_rdm(state, &self.h0, &h1, t)
    }
}
