//! Density and correlation estimators from fitted coherence series.

use serde::{Deserialize, Serialize};

use super::fit::SeriesFit;
use crate::error::{Error, Result};
use crate::series::{CorrelationEstimate, Method};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub value: f64,
    pub err: f64,
}

fn check_coupling(coupling: f64) -> Result<()> {
    if coupling == 0.0 || !coupling.is_finite() {
        return Err(Error::ZeroCoupling);
    }
    Ok(())
}

/// `ρ̄ = c₁(Im) / 2η`.
pub fn estimate_density(fit: &SeriesFit) -> Result<DensityEstimate> {
    check_coupling(fit.coupling)?;
    let two_eta = 2.0 * fit.coupling;
    Ok(DensityEstimate { value: fit.im.coefficient(1) / two_eta, err: fit.im.variance(1).sqrt() / two_eta.abs() })
}

/// Inverse-variance weighted mean; plain mean when any variance vanishes.
pub fn combine_densities(parts: &[DensityEstimate]) -> DensityEstimate {
    if parts.iter().any(|p| p.err == 0.0) {
        let exact: Vec<f64> = parts.iter().filter(|p| p.err == 0.0).map(|p| p.value).collect();
        return DensityEstimate { value: exact.iter().sum::<f64>() / exact.len() as f64, err: 0.0 };
    }
    let (num, den) = parts.iter().fold((0.0, 0.0), |(n, d), p| {
        let w = 1.0 / (p.err * p.err);
        (n + w * p.value, d + w)
    });
    DensityEstimate { value: num / den, err: den.sqrt().recip() }
}

/// `Cor(Δc) = (c₂⁽⁰⁾ − 2c₂⁽Δc⁾) / 2η²` from the real-part curvatures, and
/// `g² = (Cor − ρ̄²)/ρ̄²` with first-order error propagation.
///
/// For `Δc = 0` the series is its own reference and
/// `Cor(0) = −c₂ / 2η² = −ζ″(0)/4η²`; `reference` is then ignored.
pub fn estimate_correlation(fit: &SeriesFit, reference: Option<&SeriesFit>) -> Result<CorrelationEstimate> {
    check_coupling(fit.coupling)?;
    let eta2 = fit.coupling * fit.coupling;
    let (cor, cor_var, density) = if fit.separation == 0 {
        let c2 = fit.re.coefficient(2);
        (-c2 / (2.0 * eta2), fit.re.variance(2) / (4.0 * eta2 * eta2), estimate_density(fit)?)
    } else {
        let reference = reference.ok_or(Error::MissingReference)?;
        if reference.separation != 0 {
            return Err(Error::MissingReference);
        }
        if reference.coupling != fit.coupling {
            return Err(Error::SeriesMismatch(format!(
                "coupling {} in the reference, {} at separation {}",
                reference.coupling, fit.coupling, fit.separation
            )));
        }
        let c0 = reference.re.coefficient(2);
        let c = fit.re.coefficient(2);
        let var = (reference.re.variance(2) + 4.0 * fit.re.variance(2)) / (4.0 * eta2 * eta2);
        let density = combine_densities(&[estimate_density(fit)?, estimate_density(reference)?]);
        ((c0 - 2.0 * c) / (2.0 * eta2), var, density)
    };
    let rho = density.value;
    let rho2 = rho * rho;
    let g2 = (cor - rho2) / rho2;
    let d_cor = 1.0 / rho2;
    let d_rho = -2.0 * cor / (rho2 * rho);
    let g2_err = ((d_cor * d_cor) * cor_var + (d_rho * density.err).powi(2)).sqrt();
    Ok(CorrelationEstimate { separation: fit.separation, cor, cor_err: cor_var.sqrt(), g2, g2_err, method: Method::Protocol })
}
