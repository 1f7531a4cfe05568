//! Gaussian projection-noise surrogate.
//!
//! A single run measures `Re ζ` with variance `1 − (Re ζ)²` and `Im ζ` with
//! variance `1 − (Im ζ)²`. Each point of a noisy series is the mean of
//! `N_exp` independent draws. The `t = 0` point is exact and left untouched.
//!
//! Random numbers come from a ChaCha8 stream keyed by
//! `(seed, Δc, r, quadrature)`; run `i` is the `i`-th normal deviate of that
//! stream. The result does not depend on how points are scheduled on threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{CoherenceSeries, Provenance};
use crate::C64;

/// Excess over `|Re ζ|, |Im ζ| = 1` tolerated as rounding and clamped.
pub const MAGNITUDE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    /// Measurement runs `N_exp` per time point.
    pub runs: u64,
    pub seed: u64,
    /// Independent probe pairs measured in parallel; multiplies `runs`.
    #[serde(default = "one")]
    pub pairs: u64,
}

fn one() -> u64 {
    1
}

impl NoiseSpec {
    pub fn new(runs: u64, seed: u64) -> Self {
        Self { runs, seed, pairs: 1 }
    }

    pub fn with_pairs(mut self, pairs: u64) -> Self {
        self.pairs = pairs;
        self
    }

    /// `N_pairs × N_exp`.
    pub fn effective_runs(&self) -> u64 {
        self.runs.saturating_mul(self.pairs)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(Error::invalid("noise.runs", "need at least one run"));
        }
        if self.pairs < 1 {
            return Err(Error::invalid("noise.pairs", "need at least one probe pair"));
        }
        Ok(())
    }
}

fn single_sigma(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 1.0 + MAGNITUDE_TOL {
        return Err(Error::CoherenceOutOfRange { value: x });
    }
    let x = x.clamp(-1.0, 1.0);
    Ok((1.0 - x * x).sqrt())
}

/// Single-run standard deviations `(σ_Re, σ_Im)`.
pub fn shot_noise_sigma(zeta: C64) -> Result<(f64, f64)> {
    Ok((single_sigma(zeta.re)?, single_sigma(zeta.im)?))
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn stream_key(seed: u64, separation: usize, point: usize, quadrature: u64) -> u64 {
    let mut h = splitmix(seed);
    for part in [separation as u64, point as u64, quadrature] {
        h = splitmix(h ^ part);
    }
    h
}

/// Mean of `runs` standard normal deviates from the keyed stream.
fn mean_deviate(key: u64, runs: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    let mut sum = 0.0;
    for _ in 0..runs {
        let z: f64 = StandardNormal.sample(&mut rng);
        sum += z;
    }
    sum / runs as f64
}

/// Noisy copy of a noiseless series.
pub fn simulate_runs(series: &CoherenceSeries, noise: &NoiseSpec) -> Result<CoherenceSeries> {
    noise.validate()?;
    if !series.is_noiseless() {
        return Err(Error::SeriesMismatch("noise can only be added to a noiseless series".into()));
    }
    let runs = noise.effective_runs();
    let root = (runs as f64).sqrt();
    let points = series
        .values
        .par_iter()
        .enumerate()
        .map(|(r, &z)| {
            if r == 0 {
                // ζ(0) = 1 is known exactly.
                return Ok((z, 0.0, 0.0));
            }
            let (s_re, s_im) = shot_noise_sigma(z)?;
            let draw = |sigma: f64, quadrature: u64| {
                if sigma == 0.0 {
                    0.0
                } else {
                    sigma * mean_deviate(stream_key(noise.seed, series.separation, r, quadrature), runs)
                }
            };
            let value = C64::new(z.re + draw(s_re, 0), z.im + draw(s_im, 1));
            Ok((value, s_re / root, s_im / root))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = series.clone();
    out.values = points.iter().map(|p| p.0).collect();
    out.re_err = points.iter().map(|p| p.1).collect();
    out.im_err = points.iter().map(|p| p.2).collect();
    out.provenance = Provenance::Noisy;
    Ok(out)
}
