//! Weak-coupling (Bogoliubov) backend.
//!
//! The condensate mode `k = 0` is treated as a c-number and excluded from
//! every mode sum; anomalous averages are dropped. The remaining modes are
//! free quasiparticles with dispersion `ω_k = √(ε_k(ε_k + 2Uρ̄))`, thermally
//! occupied at inverse temperature `β` (or empty in the ground state).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{ModelSpec, ProbeLayout, TimeGrid};
use crate::series::{CoherenceSeries, CorrelationEstimate, Method, Provenance};
use crate::C64;

/// Free-particle band energy `ε_k = 2J(1 − cos ka)` with `J = a = 1`.
pub fn dispersion(k: f64) -> f64 {
    // 4 sin²(k/2) avoids the cancellation in 1 − cos k near k = 0.
    let s = (0.5 * k).sin();
    4.0 * s * s
}

/// Bogoliubov quasiparticle frequency `ω_k = √(ε_k(ε_k + 2Uρ̄))`.
pub fn quasiparticle_frequency(epsilon: f64, interaction: f64, density: f64) -> f64 {
    (epsilon * (epsilon + 2.0 * interaction * density)).sqrt()
}

/// Bose-Einstein occupation `1/(e^{βω} − 1)`; `beta = None` is the ground state.
pub fn thermal_occupation(omega: f64, beta: Option<f64>) -> Result<f64> {
    match beta {
        None => Ok(0.0),
        Some(_) if omega <= 0.0 => Err(Error::ZeroFrequencyMode),
        Some(b) => Ok(1.0 / (b * omega).exp_m1()),
    }
}

/// `|e^{−ikΔc} + 1|² = 2(1 + cos kΔc)` for the mode index `m` (`k = 2πm/M`).
/// The phase is reduced modulo `M` before the cosine so that ring
/// symmetries hold to rounding.
fn interference(m: i64, separation: usize, num_sites: usize) -> f64 {
    2.0 * (1.0 + ring_cos(m, separation, num_sites))
}

fn ring_cos(m: i64, separation: usize, num_sites: usize) -> f64 {
    let ms = num_sites as i64;
    let phase = (m * separation as i64).rem_euclid(ms);
    (2.0 * PI * phase as f64 / num_sites as f64).cos()
}

/// One non-condensed Bogoliubov mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Integer momentum label, `k = 2πm/M`.
    pub index: i64,
    pub momentum: f64,
    pub epsilon: f64,
    pub omega: f64,
    pub occupation: f64,
}

impl Mode {
    /// `coth(βω/2)`, written as `1 + 2n` so that large `βω` cannot overflow.
    pub fn coth_half(&self) -> f64 {
        1.0 + 2.0 * self.occupation
    }
}

/// Mode table for a ring of `M` sites at fixed density and temperature.
#[derive(Debug, Clone)]
pub struct ModeTable {
    num_sites: usize,
    density: f64,
    modes: Vec<Mode>,
}

impl ModeTable {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        spec.validate()?;
        let m_sites = spec.num_sites as i64;
        let beta = spec.equilibrium.inverse_temperature();
        let density = spec.mean_density();
        let lo = -(m_sites / 2);
        let hi = (m_sites + 1) / 2 - 1;
        let modes = (lo..=hi)
            .filter(|&m| m != 0)
            .map(|m| {
                let momentum = 2.0 * PI * m as f64 / m_sites as f64;
                let epsilon = dispersion(momentum);
                let omega = quasiparticle_frequency(epsilon, spec.interaction, density);
                let occupation = thermal_occupation(omega, beta)?;
                Ok(Mode { index: m, momentum, epsilon, omega, occupation })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { num_sites: spec.num_sites, density, modes })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    /// `|η_k|² = η² (ρ̄ ε_k / (M ω_k)) · 2(1 + cos kΔc)`.
    pub fn coupling_sq(&self, mode: &Mode, coupling: f64, separation: usize) -> f64 {
        probe_coupling_sq(mode, coupling, separation, self.density, self.num_sites)
    }

    /// `Cor(Δc) = ρ̄² + (ρ̄/M) Σ_{k≠0} (ε_k/ω_k)(2n_k + 1) cos(kΔc)`.
    pub fn correlation(&self, separation: usize) -> f64 {
        self.density * self.density + self.connected_correlation(separation)
    }

    /// `Cor(Δc) − ρ̄²`.
    pub fn connected_correlation(&self, separation: usize) -> f64 {
        let sum: f64 = self
            .modes
            .iter()
            .map(|md| md.epsilon / md.omega * md.coth_half() * ring_cos(md.index, separation, self.num_sites))
            .sum();
        self.density / self.num_sites as f64 * sum
    }

    pub fn g2(&self, separation: usize) -> f64 {
        self.connected_correlation(separation) / (self.density * self.density)
    }

    /// First two moments `(⟨V̂⟩, ⟨V̂²⟩)` of the probe coupling
    /// `V̂ = η(n̂_{j_L} + n̂_{j_R})` from the mode expansion.
    pub fn interaction_moments(&self, coupling: f64, separation: usize) -> (f64, f64) {
        let mean = 2.0 * self.density * coupling;
        let fluct: f64 = self
            .modes
            .iter()
            .map(|md| self.coupling_sq(md, coupling, separation) * md.coth_half())
            .sum();
        (mean, mean * mean + fluct)
    }

    /// Closed-form coherence function
    ///
    /// `ζ(t) = e^{2iηρ̄t} exp[−i Σ_k (|η_k|²/ω_k²)(ω_k t − sin ω_k t)]
    ///        × exp[−2 Σ_k (|η_k|²/ω_k²) sin²(ω_k t/2) coth(βω_k/2)]`.
    pub fn coherence(&self, t: f64, coupling: f64, separation: usize) -> C64 {
        let mut phase = 2.0 * coupling * self.density * t;
        let mut log_mag = 0.0;
        for md in &self.modes {
            let c = self.coupling_sq(md, coupling, separation) / (md.omega * md.omega);
            let wt = md.omega * t;
            phase -= c * (wt - wt.sin());
            let s = (0.5 * wt).sin();
            log_mag -= 2.0 * c * s * s * md.coth_half();
        }
        C64::from_polar(log_mag.exp(), phase)
    }

    /// Noiseless closed-form series on `grid`.
    pub fn coherence_series(&self, probes: &ProbeLayout, grid: &TimeGrid) -> CoherenceSeries {
        let values = grid
            .times()
            .into_iter()
            .map(|t| self.coherence(t, probes.coupling, probes.separation))
            .collect();
        CoherenceSeries::noiseless(*grid, probes.separation, probes.coupling, values, Provenance::ClosedForm)
    }

    pub fn estimate(&self, separation: usize) -> CorrelationEstimate {
        CorrelationEstimate::exact_value(separation, self.correlation(separation), self.density, Method::Analytic)
    }
}

/// `|η_k|²` for a probe pair at separation `Δc`.
pub fn probe_coupling_sq(mode: &Mode, coupling: f64, separation: usize, density: f64, num_sites: usize) -> f64 {
    coupling * coupling * (density * mode.epsilon / (num_sites as f64 * mode.omega))
        * interference(mode.index, separation, num_sites)
}

pub fn analytic_correlation(separation: usize, spec: &ModelSpec) -> Result<f64> {
    Ok(ModeTable::new(spec)?.correlation(separation))
}

pub fn analytic_g2(separation: usize, spec: &ModelSpec) -> Result<f64> {
    Ok(ModeTable::new(spec)?.g2(separation))
}

pub fn coherence_closed_form(t: f64, probes: &ProbeLayout, spec: &ModelSpec) -> Result<C64> {
    probes.validate(spec)?;
    Ok(ModeTable::new(spec)?.coherence(t, probes.coupling, probes.separation))
}
