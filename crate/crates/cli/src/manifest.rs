use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;
pub const FILE_NAME: &str = "manifest.json";

/// Record of one invocation, written next to its outputs.
///
/// Passing a manifest back through `--config` reruns the same computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub backend: String,
    pub seed: Option<u64>,
    pub config: RunConfig,
    pub duration_seconds: f64,
    /// File names relative to the output directory.
    pub outputs: Vec<String>,
}
