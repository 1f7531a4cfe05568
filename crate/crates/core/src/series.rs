//! Records passed between the backends, the measurement layer and the CLI.

use serde::{Deserialize, Serialize};

use crate::model::TimeGrid;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Exact,
    Noisy,
}

/// Sampled coherence function `ζ(t_r; Δc)` with per-point standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceSeries {
    pub grid: TimeGrid,
    pub separation: usize,
    /// Probe coupling `η/J` the series was generated with.
    pub coupling: f64,
    pub values: Vec<C64>,
    pub re_err: Vec<f64>,
    pub im_err: Vec<f64>,
    pub provenance: Provenance,
}

impl CoherenceSeries {
    /// A series without statistical error.
    pub fn noiseless(
        grid: TimeGrid,
        separation: usize,
        coupling: f64,
        values: Vec<C64>,
        provenance: Provenance,
    ) -> Self {
        let n = values.len();
        debug_assert_eq!(n, grid.len());
        Self {
            grid,
            separation,
            coupling,
            values,
            re_err: vec![0.0; n],
            im_err: vec![0.0; n],
            provenance,
        }
    }

    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    pub fn is_noiseless(&self) -> bool {
        self.re_err.iter().chain(&self.im_err).all(|&e| e == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    Exact,
    Protocol,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Exact => "exact",
            Method::Protocol => "protocol",
        }
    }
}

/// Density-density correlation `Cor(Δc) = ⟨n̂_j n̂_{j+Δc}⟩` and its
/// normalized connected part `g²(Δc)`, with 1σ uncertainties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    pub separation: usize,
    pub cor: f64,
    pub cor_err: f64,
    pub g2: f64,
    pub g2_err: f64,
    pub method: Method,
}

impl CorrelationEstimate {
    /// An error-free value with `g² = (Cor − ρ̄²)/ρ̄²`.
    pub fn exact_value(separation: usize, cor: f64, density: f64, method: Method) -> Self {
        let rho2 = density * density;
        Self { separation, cor, cor_err: 0.0, g2: (cor - rho2) / rho2, g2_err: 0.0, method }
    }
}
