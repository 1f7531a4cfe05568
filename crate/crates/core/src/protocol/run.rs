//! End-to-end protocol: generate `ζ(t_r; Δc)` with a backend, optionally add
//! projection noise, fit, and reconstruct `ρ̄`, `Cor(Δc)` and `g²(Δc)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::{combine_densities, estimate_correlation, estimate_density, DensityEstimate};
use super::fit::{fit_series, FitOptions};
use super::noise::{simulate_runs, NoiseSpec};
use crate::bogoliubov::ModeTable;
use crate::error::{Error, Result};
use crate::exact::ExactBackend;
use crate::model::{ModelSpec, ProbeLayout, TimeGrid};
use crate::series::{CoherenceSeries, CorrelationEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Backend {
    Bogoliubov,
    Exact { max_occupancy: usize },
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Bogoliubov => "bogoliubov",
            Backend::Exact { .. } => "exact",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRequest {
    pub spec: ModelSpec,
    pub separations: Vec<usize>,
    pub coupling: f64,
    pub grid: TimeGrid,
    pub noise: Option<NoiseSpec>,
    pub backend: Backend,
    pub fit: FitOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolOutput {
    /// One reconstruction per requested separation, in request order.
    pub estimates: Vec<CorrelationEstimate>,
    /// Backend values at the same separations.
    pub reference: Vec<CorrelationEstimate>,
    /// Density pooled over every measured series.
    pub density: DensityEstimate,
    /// Series actually fitted, `Δc = 0` first, then the requested separations
    /// in ascending order without repeats.
    pub series: Vec<CoherenceSeries>,
}

enum Source {
    Bogoliubov(ModeTable),
    Exact(Box<ExactBackend>, crate::exact::SystemState),
}

impl Source {
    fn new(spec: &ModelSpec, backend: Backend) -> Result<Self> {
        Ok(match backend {
            Backend::Bogoliubov => Source::Bogoliubov(ModeTable::new(spec)?),
            Backend::Exact { max_occupancy } => {
                let exact = ExactBackend::new(spec, max_occupancy)?;
                let state = exact.equilibrium_state()?;
                Source::Exact(Box::new(exact), state)
            }
        })
    }

    fn series(&self, probes: &ProbeLayout, grid: &TimeGrid) -> Result<CoherenceSeries> {
        match self {
            Source::Bogoliubov(table) => Ok(table.coherence_series(probes, grid)),
            Source::Exact(exact, state) => exact.coherence_series(state, probes, grid),
        }
    }

    fn truth(&self, separation: usize) -> CorrelationEstimate {
        match self {
            Source::Bogoliubov(table) => table.estimate(separation),
            Source::Exact(exact, state) => exact.estimate(state, separation),
        }
    }
}

pub fn run_protocol(request: &ProtocolRequest) -> Result<ProtocolOutput> {
    let spec = &request.spec;
    spec.validate()?;
    request.grid.validate()?;
    if let Some(noise) = &request.noise {
        noise.validate()?;
    }
    if request.separations.is_empty() {
        return Err(Error::invalid("separations", "need at least one separation"));
    }
    let mut measured: Vec<usize> = std::iter::once(0).chain(request.separations.iter().copied()).collect();
    measured.sort_unstable();
    measured.dedup();
    let probes: Vec<ProbeLayout> = measured.iter().map(|&dc| ProbeLayout::new(dc, request.coupling)).collect();
    for p in &probes {
        p.validate(spec)?;
    }

    let source = Source::new(spec, request.backend)?;
    let series = probes
        .par_iter()
        .map(|p| {
            let clean = source.series(p, &request.grid)?;
            match &request.noise {
                Some(noise) => simulate_runs(&clean, noise),
                None => Ok(clean),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let fits = series.iter().map(|s| fit_series(s, request.fit)).collect::<Result<Vec<_>>>()?;
    let reference = &fits[0];

    let estimates = request
        .separations
        .iter()
        .map(|dc| {
            let idx = measured.binary_search(dc).expect("every requested separation is measured");
            estimate_correlation(&fits[idx], Some(reference))
        })
        .collect::<Result<Vec<_>>>()?;
    let truth = request.separations.iter().map(|&dc| source.truth(dc)).collect();
    let density = combine_densities(&fits.iter().map(estimate_density).collect::<Result<Vec<_>>>()?);
    Ok(ProtocolOutput { estimates, reference: truth, density, series })
}
