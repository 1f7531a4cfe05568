//! Measurement layer: projection noise, polynomial fits of `ζ(t_r)` and the
//! reconstruction of density and density-density correlations from them.
//!
//! With `V̂ = η(n̂_{j_L} + n̂_{j_R})` the coherence function obeys
//! `ζ′(0) = i⟨V̂⟩` and `ζ″(0) = −⟨V̂²⟩`, so
//!
//! * `ρ̄ = Im ζ′(0; Δc) / 2η`,
//! * `Cor(Δc) = (½ Re ζ″(0; 0) − Re ζ″(0; Δc)) / 2η²`.

pub mod estimate;
pub mod fit;
pub mod noise;
pub mod run;

pub use estimate::{estimate_correlation, estimate_density, DensityEstimate};
pub use fit::{fit_series, FitOptions, PolyFit, SeriesFit};
pub use noise::{shot_noise_sigma, simulate_runs, NoiseSpec};
pub use run::{run_protocol, Backend, ProtocolOutput, ProtocolRequest};
