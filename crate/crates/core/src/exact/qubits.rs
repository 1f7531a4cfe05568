//! Reduced density matrix of the two probe qubits.
//!
//! Starting from `ρ̂_S ⊗ |Φ₊⟩⟨Φ₊|`, the branch `|00⟩` evolves with `Ĥ₁` and
//! `|11⟩` with `Ĥ₀`; the `|01⟩`, `|10⟩` branches are never populated. Tracing
//! out the host gives `⟨q|ρ_Q|q′⟩ = ½ Tr(Û_q ρ̂_S Û_{q′}†)`, a unit-trace
//! matrix with `⟨11|ρ_Q|00⟩ = ζ(t)/2`.
//!
//! Qubit basis order is `|00⟩, |01⟩, |10⟩, |11⟩` with the left probe first.

use nalgebra::Matrix4;

use super::eigen::{dense_spectrum, DENSE_CAP};
use super::hamiltonian::SparseHamiltonian;
use super::propagate::{cdot, dense_evolve};
use super::state::SystemState;
use crate::error::{Error, Result};
use crate::C64;

pub type QubitMatrix = Matrix4<C64>;

const IDX_00: usize = 0;
const IDX_11: usize = 3;

pub fn two_qubit_rdm(state: &SystemState, h0: &SparseHamiltonian, h1: &SparseHamiltonian, t: f64) -> Result<QubitMatrix> {
    let dim = h0.dim();
    if dim > DENSE_CAP {
        return Err(Error::DimensionOverCap { dim, cap: DENSE_CAP });
    }
    if h1.dim() != dim || state.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: h1.dim().min(state.dim()) });
    }
    let spec0 = dense_spectrum(h0);
    let spec1 = dense_spectrum(h1);
    let mut blocks = [[C64::new(0.0, 0.0); 2]; 2];
    for (w, _, ket) in state.components() {
        let ket: Vec<C64> = ket.iter().map(|&x| C64::new(x, 0.0)).collect();
        // branch 0 ↔ |00⟩ (probed), branch 1 ↔ |11⟩ (unprobed)
        let evolved = [dense_evolve(&spec1, &ket, t), dense_evolve(&spec0, &ket, t)];
        for (a, row) in blocks.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry += cdot(&evolved[b], &evolved[a]) * w;
            }
        }
    }
    let mut rho = QubitMatrix::zeros();
    let idx = [IDX_00, IDX_11];
    for a in 0..2 {
        for b in 0..2 {
            rho[(idx[a], idx[b])] = blocks[a][b] * 0.5;
        }
    }
    Ok(rho)
}

fn pauli() -> [nalgebra::Matrix2<C64>; 3] {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        nalgebra::Matrix2::new(o, l, l, o),
        nalgebra::Matrix2::new(o, -i, i, o),
        nalgebra::Matrix2::new(l, o, o, -l),
    ]
}

fn expectation(rho: &QubitMatrix, op: &QubitMatrix) -> C64 {
    (rho * op).trace()
}

/// `(Re ζ, Im ζ)` from the two-qubit Pauli correlators
/// `½⟨σx⊗σx − σy⊗σy⟩` and `½⟨σx⊗σy + σy⊗σx⟩`.
pub fn zeta_from_pauli(rho: &QubitMatrix) -> (f64, f64) {
    let [x, y, _] = pauli();
    let xx = x.kronecker(&x);
    let yy = y.kronecker(&y);
    let xy = x.kronecker(&y);
    let yx = y.kronecker(&x);
    let re = 0.5 * expectation(rho, &(xx - yy)).re;
    let im = 0.5 * expectation(rho, &(xy + yx)).re;
    (re, im)
}

/// Bell-basis elements `(ρ₊₊, ρ₋₋, ρ₊₋)` with `|Φ±⟩ = (|00⟩ ± |11⟩)/√2`.
pub fn bell_elements(rho: &QubitMatrix) -> (f64, f64, C64) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus = nalgebra::Vector4::<C64>::zeros();
    let mut minus = nalgebra::Vector4::<C64>::zeros();
    plus[IDX_00] = C64::new(h, 0.0);
    plus[IDX_11] = C64::new(h, 0.0);
    minus[IDX_00] = C64::new(h, 0.0);
    minus[IDX_11] = C64::new(-h, 0.0);
    let elem = |a: &nalgebra::Vector4<C64>, b: &nalgebra::Vector4<C64>| (a.adjoint() * rho * b)[(0, 0)];
    (elem(&plus, &plus).re, elem(&minus, &minus).re, elem(&plus, &minus))
}

/// `(Re ζ, Im ζ)` from Bell-basis elements of the unit-trace `ρ_Q`:
/// `Re ζ = ρ₊₊ − ρ₋₋`, `Im ζ = 2 Im ρ₊₋`.
pub fn zeta_from_bell(rho: &QubitMatrix) -> (f64, f64) {
    let (pp, mm, pm) = bell_elements(rho);
    (pp - mm, 2.0 * pm.im)
}

/// `2⟨11|ρ_Q|00⟩`.
pub fn zeta_from_coherence(rho: &QubitMatrix) -> C64 {
    rho[(IDX_11, IDX_00)] * 2.0
}

/// Eigenvalues of the Hermitian part of `ρ_Q`, ascending.
pub fn eigenvalues(rho: &QubitMatrix) -> [f64; 4] {
    let herm = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigenvalues();
    let mut out = [eig[0], eig[1], eig[2], eig[3]];
    out.sort_by(f64::total_cmp);
    out
}
