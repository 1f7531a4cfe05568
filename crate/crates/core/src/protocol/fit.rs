//! Weighted polynomial fits of `Re ζ(t_r)` and `Im ζ(t_r)` pinned at `t = 0`.
//!
//! Each quadrature is modelled as `y(t) = y(0) + Σ_{j=1}^{d} c_j t^j` with
//! `y(0)` taken from the series, where it is exact. Weights are `1/σ_r²`;
//! a noiseless series is fitted unweighted and reports zero covariance.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::CoherenceSeries;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitOptions {
    pub degree_re: usize,
    pub degree_im: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { degree_re: 2, degree_im: 2 }
    }
}

/// Coefficients `c_0..=c_d` (with `c_0` pinned) and the covariance of `c_1..=c_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFit {
    pub coefficients: Vec<f64>,
    pub covariance: DMatrix<f64>,
}

impl PolyFit {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `c_j`, zero beyond the fitted degree.
    pub fn coefficient(&self, j: usize) -> f64 {
        self.coefficients.get(j).copied().unwrap_or(0.0)
    }

    /// Variance of `c_j` for `j ≥ 1`; zero for the pinned constant.
    pub fn variance(&self, j: usize) -> f64 {
        if j == 0 || j > self.degree() {
            0.0
        } else {
            self.covariance[(j - 1, j - 1)]
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFit {
    pub separation: usize,
    pub coupling: f64,
    pub re: PolyFit,
    pub im: PolyFit,
}

impl SeriesFit {
    /// `ζ′(0) = c₁(Re) + i c₁(Im)`.
    pub fn first_derivative(&self) -> C64 {
        C64::new(self.re.coefficient(1), self.im.coefficient(1))
    }

    /// `ζ″(0) = 2c₂`.
    pub fn second_derivative(&self) -> C64 {
        C64::new(2.0 * self.re.coefficient(2), 2.0 * self.im.coefficient(2))
    }
}

/// Pinned weighted least squares for one quadrature.
///
/// `times[0]` must be 0; `sigma` may be all zero for a noiseless series.
pub fn fit_pinned(times: &[f64], values: &[f64], sigma: &[f64], degree: usize) -> Result<PolyFit> {
    if times.len() != values.len() || times.len() != sigma.len() {
        return Err(Error::SeriesMismatch(format!(
            "{} times, {} values, {} errors",
            times.len(),
            values.len(),
            sigma.len()
        )));
    }
    if degree == 0 {
        return Err(Error::invalid("degree", "fit degree must be at least 1"));
    }
    if times.first() != Some(&0.0) {
        return Err(Error::SeriesMismatch("series must start at t = 0".into()));
    }
    let pinned = values[0];
    let rows: Vec<usize> = (1..times.len()).collect();
    let mut distinct: Vec<f64> = rows.iter().map(|&r| times[r]).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    distinct.retain(|&t| t != 0.0);
    if distinct.len() < degree {
        return Err(Error::RankDeficient { points: distinct.len(), unknowns: degree });
    }

    let weighted = sigma[1..].iter().any(|&s| s > 0.0);
    let floor = sigma[1..].iter().copied().filter(|&s| s > 0.0).fold(f64::INFINITY, f64::min);
    let scale = times.iter().fold(0.0f64, |a, &t| a.max(t.abs()));

    let n = rows.len();
    let mut design = DMatrix::<f64>::zeros(n, degree);
    let mut rhs = DVector::<f64>::zeros(n);
    for (i, &r) in rows.iter().enumerate() {
        let w = if weighted { 1.0 / sigma[r].max(floor) } else { 1.0 };
        let x = times[r] / scale;
        let mut p = 1.0;
        for j in 0..degree {
            p *= x;
            design[(i, j)] = w * p;
        }
        rhs[i] = w * (values[r] - pinned);
    }

    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd.rank(smax * 1e-13);
    if rank < degree {
        return Err(Error::RankDeficient { points: rank, unknowns: degree });
    }
    let scaled = svd.solve(&rhs, smax * 1e-13).map_err(|e| Error::SeriesMismatch(e.to_string()))?;
    let v_t = svd.v_t.as_ref().expect("requested V");
    let inv_s2 = DVector::from_iterator(degree, svd.singular_values.iter().map(|s| 1.0 / (s * s)));
    let cov_scaled = v_t.transpose() * DMatrix::from_diagonal(&inv_s2) * v_t;

    let unscale: Vec<f64> = (1..=degree).map(|j| scale.powi(j as i32)).collect();
    let mut coefficients = vec![pinned];
    coefficients.extend(scaled.iter().zip(&unscale).map(|(c, s)| c / s));
    let covariance = if weighted {
        DMatrix::from_fn(degree, degree, |a, b| cov_scaled[(a, b)] / (unscale[a] * unscale[b]))
    } else {
        DMatrix::zeros(degree, degree)
    };
    Ok(PolyFit { coefficients, covariance })
}

/// Fits both quadratures of a series.
pub fn fit_series(series: &CoherenceSeries, options: FitOptions) -> Result<SeriesFit> {
    let times = series.times();
    if times.len() != series.values.len() {
        return Err(Error::SeriesMismatch(format!("{} times for {} values", times.len(), series.values.len())));
    }
    let re: Vec<f64> = series.values.iter().map(|z| z.re).collect();
    let im: Vec<f64> = series.values.iter().map(|z| z.im).collect();
    Ok(SeriesFit {
        separation: series.separation,
        coupling: series.coupling,
        re: fit_pinned(&times, &re, &series.re_err, options.degree_re)?,
        im: fit_pinned(&times, &im, &series.im_err, options.degree_im)?,
    })
}
