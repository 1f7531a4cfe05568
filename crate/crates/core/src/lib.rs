//! Two-probe coherence simulation for the one-dimensional Bose-Hubbard model.
//!
//! Two impurity qubits prepared in a Bell state couple to the local boson
//! density at sites `j_L` and `j_R = j_L + Δc`. The off-diagonal element of
//! their reduced density matrix, the coherence function `ζ(t; Δc)`, encodes
//! the mean density in its slope and the density-density correlation in its
//! curvature at `t = 0`.
//!
//! The crate provides
//!
//! * [`model`]: validated parameters in natural units (`ħ = J = a = 1`),
//! * [`bogoliubov`]: closed-form weak-coupling correlations and coherence,
//! * [`exact`]: Fock-space exact diagonalization for strong coupling,
//! * [`protocol`]: projection-noise simulation, polynomial fits and the
//!   reconstruction of density and correlations from noisy coherence data.

pub mod bogoliubov;
pub mod error;
pub mod exact;
pub mod model;
pub mod protocol;
pub mod series;

pub use error::{Error, Result};
pub use model::{
    validate, Boundary, Config, EquilibriumKind, EquilibriumSpec, ModelSpec, ProbeLayout,
    TimeGrid,
};
pub use series::{CoherenceSeries, CorrelationEstimate, Method, Provenance};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
