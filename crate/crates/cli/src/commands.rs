use std::fs;
use std::path::Path;
use std::time::Instant;

use qprobe_core::bogoliubov::ModeTable;
use qprobe_core::exact::ExactBackend;
use qprobe_core::protocol::{run_protocol, Backend, ProtocolRequest};
use qprobe_core::{CorrelationEstimate, ModelSpec};
use rayon::prelude::*;

use crate::config::{Resolved, RunConfig};
use crate::error::{CliError, Result};
use crate::manifest::{RunManifest, FILE_NAME, SCHEMA_VERSION};
use crate::output::{self, ConvergenceRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Closed-form Bogoliubov correlations and coherence series.
    Bogoliubov,
    /// Exact-diagonalization correlations and coherence series.
    Exact,
    /// Simulated measurement and reconstruction.
    Protocol,
    /// Exact g² over U/J and over the occupation cap.
    Sweep,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Bogoliubov => "bogoliubov",
            Command::Exact => "exact",
            Command::Protocol => "protocol",
            Command::Sweep => "sweep",
        }
    }
}

type Outputs = Vec<(&'static str, String)>;

/// Runs `command`, writes its tables and the manifest into `out`.
pub fn execute(command: Command, config: &RunConfig, out: &Path) -> Result<RunManifest> {
    let start = Instant::now();
    let resolved = config.resolve()?;
    let (backend, files) = match command {
        Command::Bogoliubov => ("bogoliubov", bogoliubov(config, &resolved)?),
        Command::Exact => ("exact", exact(config, &resolved)?),
        Command::Protocol => (config.backend.as_str(), protocol(config, &resolved)?),
        Command::Sweep => ("exact", sweep(config, &resolved)?),
    };

    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    for (name, contents) in &files {
        output::write_atomic(&out.join(name), contents)?;
    }
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.as_str().to_string(),
        backend: backend.to_string(),
        seed: config.seed(),
        config: config.clone(),
        duration_seconds: start.elapsed().as_secs_f64(),
        outputs: files.iter().map(|(name, _)| name.to_string()).collect(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    output::write_atomic(&out.join(FILE_NAME), &(text + "\n"))?;
    Ok(manifest)
}

fn request(config: &RunConfig, r: &Resolved, backend: Backend) -> ProtocolRequest {
    ProtocolRequest {
        spec: r.spec.clone(),
        separations: config.probes.separations.clone(),
        coupling: config.probes.coupling,
        grid: r.grid,
        noise: config.noise,
        backend,
        fit: config.fit,
    }
}

fn bogoliubov(config: &RunConfig, r: &Resolved) -> Result<Outputs> {
    let table = ModeTable::new(&r.spec)?;
    let estimates: Vec<_> = config.probes.separations.iter().map(|&dc| table.estimate(dc)).collect();
    let series: Vec<_> = r.probes.par_iter().map(|p| table.coherence_series(p, &r.grid)).collect();
    let mut files = vec![("g2_analytic.csv", output::correlation_csv(&estimates)), ("zeta_series.csv", output::series_csv(&series))];
    if config.noise.is_some() {
        let run = run_protocol(&request(config, r, Backend::Bogoliubov))?;
        files.push(("g2_protocol.csv", output::correlation_csv(&run.estimates)));
    }
    Ok(files)
}

fn exact(config: &RunConfig, r: &Resolved) -> Result<Outputs> {
    let backend = ExactBackend::new(&r.spec, config.model.max_occupancy)?;
    let state = backend.equilibrium_state()?;
    let estimates: Vec<_> = config.probes.separations.iter().map(|&dc| backend.estimate(&state, dc)).collect();
    let series = r
        .probes
        .par_iter()
        .map(|p| backend.coherence_series(&state, p, &r.grid))
        .collect::<qprobe_core::Result<Vec<_>>>()?;
    Ok(vec![("g2_exact.csv", output::correlation_csv(&estimates)), ("zeta_series.csv", output::series_csv(&series))])
}

fn protocol(config: &RunConfig, r: &Resolved) -> Result<Outputs> {
    let run = run_protocol(&request(config, r, config.backend()))?;
    Ok(vec![
        ("g2_protocol.csv", output::correlation_csv(&run.estimates)),
        ("g2_reference.csv", output::correlation_csv(&run.reference)),
        ("zeta_series.csv", output::series_csv(&run.series)),
        ("density.csv", output::density_csv(&run.density)),
    ])
}

struct SweepPoint {
    interaction: f64,
    cap: usize,
    dimension: usize,
    estimates: Vec<CorrelationEstimate>,
}

fn sweep_point(spec: &ModelSpec, interaction: f64, cap: usize, separations: &[usize]) -> Result<SweepPoint> {
    let spec = ModelSpec { interaction, ..spec.clone() };
    let backend = ExactBackend::new(&spec, cap)?;
    let state = backend.equilibrium_state()?;
    Ok(SweepPoint {
        interaction,
        cap,
        dimension: backend.basis().dim(),
        estimates: separations.iter().map(|&dc| backend.estimate(&state, dc)).collect(),
    })
}

fn sweep(config: &RunConfig, r: &Resolved) -> Result<Outputs> {
    let sweep = config.sweep.clone().unwrap_or_default();
    let mut caps = sweep.max_occupancies.clone();
    caps.push(config.model.max_occupancy);
    caps.sort_unstable();
    caps.dedup();
    let largest = *caps.last().expect("non-empty");
    let jobs: Vec<(f64, usize)> = sweep.interactions.iter().flat_map(|&u| caps.iter().map(move |&c| (u, c))).collect();
    let points = jobs
        .par_iter()
        .map(|&(u, cap)| sweep_point(&r.spec, u, cap, &config.probes.separations))
        .collect::<Result<Vec<_>>>()?;

    let at = |u: f64, cap: usize| points.iter().find(|p| p.interaction == u && p.cap == cap).expect("computed");
    let by_u: Vec<_> =
        sweep.interactions.iter().map(|&u| (u, at(u, config.model.max_occupancy).estimates.clone())).collect();
    let mut rows = Vec::new();
    for &u in &sweep.interactions {
        let best = at(u, largest);
        for &cap in caps.iter().filter(|c| sweep.max_occupancies.contains(c)) {
            let p = at(u, cap);
            for (e, b) in p.estimates.iter().zip(&best.estimates) {
                rows.push(ConvergenceRow {
                    interaction: u,
                    max_occupancy: cap,
                    dimension: p.dimension,
                    separation: e.separation,
                    g2: e.g2,
                    deviation: e.g2 - b.g2,
                });
            }
        }
    }
    Ok(vec![("g2_vs_UJ.csv", output::sweep_csv(&by_u)), ("cap_convergence.csv", output::convergence_csv(&rows))])
}
