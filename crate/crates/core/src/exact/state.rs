//! Equilibrium states of the host and their density observables.

use nalgebra::DMatrix;

use super::basis::FockBasis;
use super::eigen::{dense_spectrum, ground_state, residual};
use super::hamiltonian::SparseHamiltonian;
use crate::error::{Error, Result};

/// Largest dimension for which a thermal ensemble is built.
pub const THERMAL_CAP: usize = 4000;

/// Host state: a pure eigenvector or a canonical ensemble over eigenpairs.
#[derive(Debug, Clone)]
pub enum SystemState {
    Pure { energy: f64, vector: Vec<f64> },
    Thermal { beta: f64, energies: Vec<f64>, vectors: DMatrix<f64>, weights: Vec<f64> },
}

impl SystemState {
    pub fn ground(h: &SparseHamiltonian) -> Result<Self> {
        let (energy, vector) = ground_state(h)?;
        Ok(SystemState::Pure { energy, vector })
    }

    pub fn dim(&self) -> usize {
        match self {
            SystemState::Pure { vector, .. } => vector.len(),
            SystemState::Thermal { vectors, .. } => vectors.nrows(),
        }
    }

    /// Eigenpairs with non-zero weight: `(weight, energy, vector)`.
    pub fn components(&self) -> Vec<(f64, f64, Vec<f64>)> {
        match self {
            SystemState::Pure { energy, vector } => vec![(1.0, *energy, vector.clone())],
            SystemState::Thermal { energies, vectors, weights, .. } => weights
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > 0.0)
                .map(|(n, &w)| (w, energies[n], vectors.column(n).iter().copied().collect()))
                .collect(),
        }
    }

    /// Diagonal of the density matrix in the Fock basis.
    pub fn fock_probabilities(&self) -> Vec<f64> {
        match self {
            SystemState::Pure { vector, .. } => vector.iter().map(|x| x * x).collect(),
            SystemState::Thermal { vectors, weights, .. } => (0..vectors.nrows())
                .map(|s| weights.iter().enumerate().map(|(n, w)| w * vectors[(s, n)].powi(2)).sum())
                .collect(),
        }
    }

    /// Largest `‖Ĥψ_n − E_nψ_n‖` over the populated eigenpairs.
    pub fn stationarity_residual(&self, h: &SparseHamiltonian) -> Result<f64> {
        if self.dim() != h.dim() {
            return Err(Error::DimensionMismatch { expected: h.dim(), actual: self.dim() });
        }
        Ok(self
            .components()
            .iter()
            .filter(|(w, _, _)| *w > 1e-14)
            .map(|(_, e, v)| residual(h, *e, v))
            .fold(0.0, f64::max))
    }
}

/// Canonical ensemble `e^{−βĤ}/Z` from the full spectrum.
///
/// `beta = f64::INFINITY` puts equal weight on the (possibly degenerate)
/// lowest level.
pub fn thermal_state(h: &SparseHamiltonian, beta: f64) -> Result<SystemState> {
    if h.dim() > THERMAL_CAP {
        return Err(Error::DimensionOverCap { dim: h.dim(), cap: THERMAL_CAP });
    }
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::invalid("beta", format!("inverse temperature must be >= 0, got {beta}")));
    }
    let spec = dense_spectrum(h);
    let e0 = spec.values[0];
    let raw: Vec<f64> = if beta.is_infinite() {
        spec.values.iter().map(|&e| if e - e0 <= 1e-10 { 1.0 } else { 0.0 }).collect()
    } else {
        spec.values.iter().map(|&e| (-beta * (e - e0)).exp()).collect()
    };
    let z: f64 = raw.iter().sum();
    let weights = raw.into_iter().map(|w| w / z).collect();
    Ok(SystemState::Thermal { beta, energies: spec.values, vectors: spec.vectors, weights })
}

/// `⟨n̂_i⟩` for every site.
pub fn densities(basis: &FockBasis, state: &SystemState) -> Vec<f64> {
    let probs = state.fock_probabilities();
    let mut out = vec![0.0; basis.num_sites()];
    for (p, occ) in probs.iter().zip(basis.iter()) {
        for (o, &n) in out.iter_mut().zip(occ) {
            *o += p * n as f64;
        }
    }
    out
}

/// `⟨n̂_i n̂_j⟩`.
pub fn density_pair(basis: &FockBasis, state: &SystemState, i: usize, j: usize) -> f64 {
    let probs = state.fock_probabilities();
    density_pair_from(basis, &probs, i, j)
}

fn density_pair_from(basis: &FockBasis, probs: &[f64], i: usize, j: usize) -> f64 {
    probs.iter().zip(basis.iter()).map(|(p, occ)| p * occ[i] as f64 * occ[j] as f64).sum()
}

/// Reference sites used for averaging at separation `Δc`: the whole ring when
/// periodic, otherwise those with `i + Δc` on the chain.
fn reference_pairs(num_sites: usize, separation: usize, periodic: bool) -> Vec<(usize, usize)> {
    if periodic {
        (0..num_sites).map(|i| (i, (i + separation) % num_sites)).collect()
    } else {
        (0..num_sites.saturating_sub(separation)).map(|i| (i, i + separation)).collect()
    }
}

/// Site-averaged `⟨n̂_i n̂_{i+Δc}⟩`.
pub fn exact_correlation(basis: &FockBasis, state: &SystemState, separation: usize, periodic: bool) -> f64 {
    let probs = state.fock_probabilities();
    let pairs = reference_pairs(basis.num_sites(), separation, periodic);
    pairs.iter().map(|&(i, j)| density_pair_from(basis, &probs, i, j)).sum::<f64>() / pairs.len() as f64
}

/// Site-averaged `(⟨n̂_i n̂_{i+Δc}⟩ − ⟨n̂_i⟩⟨n̂_{i+Δc}⟩)/⟨n̂_i⟩²`.
pub fn exact_g2(basis: &FockBasis, state: &SystemState, separation: usize, periodic: bool) -> f64 {
    let probs = state.fock_probabilities();
    let dens = densities(basis, state);
    let pairs = reference_pairs(basis.num_sites(), separation, periodic);
    pairs
        .iter()
        .map(|&(i, j)| (density_pair_from(basis, &probs, i, j) - dens[i] * dens[j]) / (dens[i] * dens[i]))
        .sum::<f64>()
        / pairs.len() as f64
}

/// `⟨Ô⟩` and `⟨Ô²⟩` for a diagonal operator `Ô = Σ_i c_i n̂_i`.
pub fn linear_density_moments(basis: &FockBasis, state: &SystemState, coefficients: &[f64]) -> (f64, f64) {
    let probs = state.fock_probabilities();
    probs.iter().zip(basis.iter()).fold((0.0, 0.0), |(m1, m2), (p, occ)| {
        let v: f64 = occ.iter().zip(coefficients).map(|(&n, c)| c * n as f64).sum();
        (m1 + p * v, m2 + p * v * v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::hamiltonian::build_hamiltonian;
    use crate::model::ModelSpec;

    fn setup(m: usize, n: usize, cap: usize, u: f64) -> (FockBasis, SparseHamiltonian) {
        let basis = FockBasis::new(m, n, cap).unwrap();
        let h = build_hamiltonian(&basis, &ModelSpec::new(m, n, u), &vec![0.0; m]).unwrap();
        (basis, h)
    }

    #[test]
    fn two_site_free_pair_correlation() {
        let (basis, h) = setup(2, 2, 4, 0.0);
        let state = SystemState::ground(&h).unwrap();
        assert!((density_pair(&basis, &state, 0, 1) - 0.5).abs() < 1e-12);
        assert!((exact_g2(&basis, &state, 1, true) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn mott_product_state_has_no_connected_correlation() {
        let (basis, h) = setup(2, 2, 4, 1e8);
        let state = SystemState::ground(&h).unwrap();
        assert!((density_pair(&basis, &state, 0, 1) - 1.0).abs() < 1e-7);
        assert!(exact_g2(&basis, &state, 1, true).abs() < 1e-7);
    }

    #[test]
    fn periodic_densities_are_uniform() {
        let (basis, h) = setup(6, 6, 3, 2.0);
        let state = SystemState::ground(&h).unwrap();
        let d = densities(&basis, &state);
        assert!(d.iter().all(|x| (x - 1.0).abs() < 1e-10));
        let pairs: Vec<f64> = (0..6).map(|i| density_pair(&basis, &state, i, (i + 2) % 6)).collect();
        assert!(pairs.iter().all(|p| (p - pairs[0]).abs() < 1e-10));
    }

    #[test]
    fn thermal_weight_limits() {
        let (_, h) = setup(3, 3, 3, 1.0);
        let SystemState::Thermal { weights, energies, .. } = thermal_state(&h, f64::INFINITY).unwrap() else {
            unreachable!()
        };
        assert_eq!(weights[0], 1.0);
        assert!(weights[1..].iter().all(|&w| w == 0.0));
        let SystemState::Thermal { weights, .. } = thermal_state(&h, 0.0).unwrap() else { unreachable!() };
        assert!(weights.iter().all(|&w| (w - 1.0 / h.dim() as f64).abs() < 1e-15));
        let beta = 0.7;
        let SystemState::Thermal { weights, .. } = thermal_state(&h, beta).unwrap() else { unreachable!() };
        let ratio = weights[1] / weights[0];
        assert!((ratio - (-beta * (energies[1] - energies[0])).exp()).abs() < 1e-14);
        assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn thermal_cap_enforced() {
        let (_, h) = setup(8, 8, 4, 1.0);
        assert_eq!(thermal_state(&h, 1.0).unwrap_err(), Error::DimensionOverCap { dim: 5475, cap: THERMAL_CAP });
    }
}
