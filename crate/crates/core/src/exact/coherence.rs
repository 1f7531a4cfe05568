//! Loschmidt-echo evaluation of the coherence function,
//! `ζ(t) = Tr(e^{+iĤ₁t} e^{−iĤ₀t} ρ̂_S)` with `[ρ̂_S, Ĥ₀] = 0`.
//!
//! For an eigen-ensemble `ρ̂_S = Σ_n w_n |n⟩⟨n|` this is
//! `Σ_n w_n e^{−iE_n t} ⟨n|e^{+iĤ₁t}|n⟩`.

use nalgebra::DMatrix;

use super::eigen::{dense_spectrum, DENSE_CAP};
use super::hamiltonian::SparseHamiltonian;
use super::propagate::{cdot, Propagator};
use super::state::SystemState;
use crate::error::{Error, Result};
use crate::model::TimeGrid;
use crate::series::{CoherenceSeries, Provenance};
use crate::C64;

/// Stationarity residual above which a state is rejected as non-equilibrium.
pub const EQUILIBRIUM_TOL: f64 = 1e-8;

/// Spectral weights of one populated eigenstate `|n⟩` over the eigenbasis of `Ĥ₁`.
struct Component {
    weight: f64,
    energy: f64,
    /// `|⟨m₁|n⟩|²` normalized to unit sum.
    overlaps: Vec<f64>,
}

enum Kernel<'a> {
    Spectral { energies: Vec<f64>, components: Vec<Component> },
    Krylov { h1: &'a SparseHamiltonian, energy: f64, psi: Vec<C64> },
}

/// Evaluates `ζ(t)` for one state and one probed Hamiltonian.
pub struct CoherenceEvaluator<'a> {
    kernel: Kernel<'a>,
}

impl<'a> CoherenceEvaluator<'a> {
    pub fn new(state: &SystemState, h0: &SparseHamiltonian, h1: &'a SparseHamiltonian) -> Result<Self> {
        if h1.dim() != h0.dim() {
            return Err(Error::DimensionMismatch { expected: h0.dim(), actual: h1.dim() });
        }
        let residual = state.stationarity_residual(h0)?;
        if residual > EQUILIBRIUM_TOL {
            return Err(Error::NotEquilibrium { residual });
        }
        let kernel = match state {
            SystemState::Pure { energy, vector } if h1.dim() >= DENSE_CAP => Kernel::Krylov {
                h1,
                energy: *energy,
                psi: vector.iter().map(|&x| C64::new(x, 0.0)).collect(),
            },
            _ => {
                let spec1 = dense_spectrum(h1);
                let populated = state.components();
                let kets = DMatrix::from_fn(h1.dim(), populated.len(), |s, n| populated[n].2[s]);
                let amplitudes = spec1.vectors.tr_mul(&kets);
                let components = populated
                    .iter()
                    .enumerate()
                    .map(|(n, &(weight, energy, _))| {
                        let raw: Vec<f64> = amplitudes.column(n).iter().map(|a| a * a).collect();
                        let total: f64 = raw.iter().sum();
                        Component { weight, energy, overlaps: raw.into_iter().map(|p| p / total).collect() }
                    })
                    .collect();
                Kernel::Spectral { energies: spec1.values, components }
            }
        };
        Ok(Self { kernel })
    }

    /// `ζ(t)` for any real `t`.
    pub fn at(&self, t: f64) -> Result<C64> {
        match &self.kernel {
            Kernel::Spectral { energies, components } => Ok(spectral_zeta(energies, components, t)),
            Kernel::Krylov { h1, energy, psi } => {
                let phi = Propagator::krylov(h1).evolve(psi, t)?;
                Ok(krylov_zeta(*energy, psi, &phi, t))
            }
        }
    }

    /// `ζ(t_r)` on a grid, stepping the state forward for the Krylov path.
    pub fn series(&self, grid: &TimeGrid) -> Result<Vec<C64>> {
        match &self.kernel {
            Kernel::Spectral { energies, components } => {
                Ok(grid.times().into_iter().map(|t| spectral_zeta(energies, components, t)).collect())
            }
            Kernel::Krylov { h1, energy, psi } => {
                let prop = Propagator::krylov(h1);
                let mut out = Vec::with_capacity(grid.len());
                out.push(C64::new(1.0, 0.0));
                let mut phi = psi.clone();
                for r in 1..=grid.count {
                    phi = prop.evolve(&phi, grid.step)?;
                    out.push(krylov_zeta(*energy, psi, &phi, grid.time(r)));
                }
                Ok(out)
            }
        }
    }
}

fn spectral_zeta(energies: &[f64], components: &[Component], t: f64) -> C64 {
    components
        .iter()
        .map(|c| {
            let echo: C64 =
                c.overlaps.iter().zip(energies).map(|(p, e1)| C64::from_polar(*p, (e1 - c.energy) * t)).sum();
            echo * c.weight
        })
        .sum()
}

/// `e^{−iE₀t} ⟨ψ₀|e^{+iĤ₁t}|ψ₀⟩` from `φ = e^{−iĤ₁t}ψ₀`.
fn krylov_zeta(energy: f64, psi: &[C64], phi: &[C64], t: f64) -> C64 {
    cdot(psi, phi).conj() * C64::from_polar(1.0, -energy * t)
}

/// Noiseless coherence series of an equilibrium state.
pub fn coherence_series_ed(
    state: &SystemState,
    h0: &SparseHamiltonian,
    h1: &SparseHamiltonian,
    separation: usize,
    coupling: f64,
    grid: &TimeGrid,
) -> Result<CoherenceSeries> {
    let values = CoherenceEvaluator::new(state, h0, h1)?.series(grid)?;
    Ok(CoherenceSeries::noiseless(*grid, separation, coupling, values, Provenance::Exact))
}
