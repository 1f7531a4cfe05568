//! Command-line front end: configuration loading, run manifests and CSV output.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod output;

use std::path::PathBuf;

use clap::Parser;

pub use commands::{execute, Command};
pub use config::{BackendChoice, RunConfig};
pub use error::{CliError, Result};
pub use manifest::RunManifest;

#[derive(Debug, Clone, Parser)]
#[command(name = "qprobe", version, about = "Two-qubit probing of density correlations in a Bose-Hubbard ring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON configuration, or a manifest from an earlier run.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Overrides `noise.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Overrides `backend` for the protocol subcommand.
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendChoice>,

    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,

    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "QPROBE_THREADS")]
    pub threads: Option<usize>,
}

impl Cli {
    /// Configuration with command-line overrides applied.
    pub fn effective_config(&self) -> Result<RunConfig> {
        let path = self.config.as_ref().ok_or_else(|| CliError::Config("--config is required".into()))?;
        let mut config = RunConfig::load(path)?;
        if let Some(seed) = self.seed {
            match config.noise.as_mut() {
                Some(noise) => noise.seed = seed,
                None => return Err(CliError::Config("--seed given but the configuration has no noise section".into())),
            }
        }
        if let Some(backend) = self.backend {
            config.backend = backend;
        }
        Ok(config)
    }

    pub fn run(&self) -> Result<RunManifest> {
        let config = self.effective_config()?;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(self.threads.unwrap_or(0)).build()?;
        pool.install(|| execute(self.command, &config, &self.out))
    }
}
