use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("probe separation {separation} out of range for {sites} sites")]
    SeparationOutOfRange { separation: usize, sites: usize },

    #[error("thermal equilibrium requires a positive inverse temperature")]
    MissingInverseTemperature,

    #[error("empty particle-number sector: {particles} bosons do not fit on {sites} sites with cap {cap}")]
    EmptySector { sites: usize, particles: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dimension {dim} exceeds the dense cap {cap}")]
    DimensionOverCap { dim: usize, cap: usize },

    #[error("{solver} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { solver: &'static str, iterations: usize, residual: f64 },

    #[error("state is not stationary under the unprobed Hamiltonian (residual {residual:e})")]
    NotEquilibrium { residual: f64 },

    #[error("zero-frequency mode with finite inverse temperature")]
    ZeroFrequencyMode,

    #[error("coherence magnitude {value} exceeds 1")]
    CoherenceOutOfRange { value: f64 },

    #[error("rank-deficient fit: {points} distinct times for {unknowns} unknowns")]
    RankDeficient { points: usize, unknowns: usize },

    #[error("probe coupling is zero; no signal to invert")]
    ZeroCoupling,

    #[error("reference series at separation 0 is missing")]
    MissingReference,

    #[error("series mismatch: {0}")]
    SeriesMismatch(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
