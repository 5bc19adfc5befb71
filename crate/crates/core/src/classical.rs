//! Exact classical detectors. These are the reference values every quantum
//! estimator in the crate is checked against.
//!
//! All functions here work on genuine features only; padded columns never
//! enter a model.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::encode::Dataset;
use crate::error::{Error, Result};

/// Minimum admissible variance or covariance eigenvalue.
pub const VARIANCE_FLOOR: f64 = 1e-12;

/// Scores within this relative distance of a threshold count as ties, and
/// ties classify as [`Label::Normal`].
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Normal,
    Anomaly,
}

/// `Anomaly` iff `score < threshold`, strictly and outside the tie band.
pub fn label_if_below(score: f64, threshold: f64) -> Label {
    if score < threshold - TIE_TOLERANCE * threshold.abs().max(1.0) {
        Label::Anomaly
    } else {
        Label::Normal
    }
}

/// `Anomaly` iff `score > threshold`, strictly and outside the tie band.
pub fn label_if_above(score: f64, threshold: f64) -> Label {
    if score > threshold + TIE_TOLERANCE * threshold.abs().max(1.0) {
        Label::Anomaly
    } else {
        Label::Normal
    }
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// Independent per-feature Gaussians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityModel {
    pub mu: Vec<f64>,
    pub sigma2: Vec<f64>,
}

impl DensityModel {
    pub fn dim(&self) -> usize {
        self.mu.len()
    }
}

pub fn fit_density(data: &Dataset) -> Result<DensityModel> {
    fit_density_with_floor(data, VARIANCE_FLOOR)
}

/// Means and population variances (divisor `M`) of each genuine feature.
pub fn fit_density_with_floor(data: &Dataset, floor: f64) -> Result<DensityModel> {
    let m = data.samples();
    if m < 2 {
        return Err(Error::TooFewSamples(m));
    }
    let d = data.features();
    let mut mu = vec![0.0; d];
    for i in 0..m {
        for (acc, x) in mu.iter_mut().zip(data.genuine_row(i)) {
            *acc += x;
        }
    }
    mu.iter_mut().for_each(|x| *x /= m as f64);
    let mut sigma2 = vec![0.0; d];
    for i in 0..m {
        for ((acc, x), mean) in sigma2.iter_mut().zip(data.genuine_row(i)).zip(&mu) {
            *acc += (x - mean).powi(2);
        }
    }
    sigma2.iter_mut().for_each(|x| *x /= m as f64);
    for (column, &variance) in sigma2.iter().enumerate() {
        if variance < floor {
            return Err(Error::DegenerateFeature { column, variance, floor });
        }
    }
    Ok(DensityModel { mu, sigma2 })
}

/// `ln p(x) = −(d/2) ln 2π − Σ ln σ_j − Σ (x_j − μ_j)² / (2σ_j²)`
pub fn log_density(model: &DensityModel, x: &[f64]) -> Result<f64> {
    check_dim(model.dim(), x.len())?;
    let d = model.dim() as f64;
    let mut acc = -0.5 * d * (2.0 * PI).ln();
    for ((xj, mu), s2) in x.iter().zip(&model.mu).zip(&model.sigma2) {
        acc -= 0.5 * s2.ln() + (xj - mu).powi(2) / (2.0 * s2);
    }
    Ok(acc)
}

/// Returns the label and the log-density score. Anomaly iff `ln p(x) < ln ε`.
pub fn classify_density(model: &DensityModel, x: &[f64], epsilon: f64) -> Result<(Label, f64)> {
    check_epsilon(epsilon)?;
    let score = log_density(model, x)?;
    Ok((label_if_below(score, epsilon.ln()), score))
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("epsilon must be positive, got {epsilon}")))
    }
}

/// Which normalization the sample covariance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovarianceDivisor {
    /// `1/M`
    Population,
    /// `1/(M − 1)`
    Sample,
}

impl CovarianceDivisor {
    pub fn value(self, m: usize) -> f64 {
        match self {
            Self::Population => m as f64,
            Self::Sample => (m - 1) as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianModel {
    pub mu: Vec<f64>,
    pub covariance: DMatrix<f64>,
    pub logdet: f64,
    pub trace: f64,
    pub divisor: CovarianceDivisor,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl GaussianModel {
    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.eigenvalues.as_slice()
    }
}

pub fn fit_gaussian(data: &Dataset) -> Result<GaussianModel> {
    fit_gaussian_with(data, CovarianceDivisor::Population)
}

pub fn fit_gaussian_with(data: &Dataset, divisor: CovarianceDivisor) -> Result<GaussianModel> {
    let m = data.samples();
    if m < 2 {
        return Err(Error::TooFewSamples(m));
    }
    let d = data.features();
    let mut mu = vec![0.0; d];
    for i in 0..m {
        for (acc, x) in mu.iter_mut().zip(data.genuine_row(i)) {
            *acc += x;
        }
    }
    mu.iter_mut().for_each(|x| *x /= m as f64);
    let mut cov = DMatrix::<f64>::zeros(d, d);
    for i in 0..m {
        let z = DVector::from_iterator(d, data.genuine_row(i).iter().zip(&mu).map(|(x, u)| x - u));
        cov += &z * z.transpose();
    }
    cov /= divisor.value(m);
    let cov = (&cov + cov.transpose()) * 0.5;
    from_covariance(mu, cov, divisor)
}

/// Builds a model from a known mean and covariance.
pub fn from_covariance(
    mu: Vec<f64>,
    covariance: DMatrix<f64>,
    divisor: CovarianceDivisor,
) -> Result<GaussianModel> {
    check_dim(mu.len(), covariance.nrows())?;
    let eig = covariance.clone().symmetric_eigen();
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < VARIANCE_FLOOR {
        return Err(Error::RankDeficient { eigenvalue: min, floor: VARIANCE_FLOOR });
    }
    let logdet = eig.eigenvalues.iter().map(|l| l.ln()).sum();
    let trace = covariance.trace();
    Ok(GaussianModel {
        mu,
        covariance,
        logdet,
        trace,
        divisor,
        eigenvalues: eig.eigenvalues,
        eigenvectors: eig.eigenvectors,
    })
}

/// `(x − μ)ᵀ C⁻¹ (x − μ)` through the eigenbasis of `C`.
pub fn mahalanobis(model: &GaussianModel, x: &[f64]) -> Result<f64> {
    check_dim(model.dim(), x.len())?;
    let z = DVector::from_iterator(model.dim(), x.iter().zip(&model.mu).map(|(a, b)| a - b));
    let proj = model.eigenvectors.transpose() * z;
    Ok(proj
        .iter()
        .zip(model.eigenvalues.iter())
        .map(|(b, l)| b * b / l.max(VARIANCE_FLOOR))
        .sum())
}

/// `−2 ln((2π)^{d/2} |C|^{1/2} ε)`: the Mahalanobis threshold equivalent to
/// `p(x) < ε` under the multivariate Gaussian density.
pub fn gaussian_threshold(d: usize, logdet: f64, epsilon: f64) -> f64 {
    -(d as f64) * (2.0 * PI).ln() - logdet - 2.0 * epsilon.ln()
}

/// Returns `(label, p_test, threshold)`; anomaly iff `p_test > threshold`.
pub fn classify_gaussian(
    model: &GaussianModel,
    x: &[f64],
    epsilon: f64,
) -> Result<(Label, f64, f64)> {
    check_epsilon(epsilon)?;
    let p_test = mahalanobis(model, x)?;
    let threshold = gaussian_threshold(model.dim(), model.logdet, epsilon);
    Ok((label_if_above(p_test, threshold), p_test, threshold))
}

/// `unit(v − μ)` restricted to genuine features.
fn centered_unit(v: &[f64], mu: &[f64]) -> Result<Vec<f64>> {
    let z: Vec<f64> = v.iter().zip(mu).map(|(a, b)| a - b).collect();
    let n = z.iter().map(|a| a * a).sum::<f64>().sqrt();
    if n < VARIANCE_FLOOR {
        return Err(Error::ZeroVector);
    }
    Ok(z.into_iter().map(|a| a / n).collect())
}

/// Unit-normalized centered training states `unit(x^i − μ)`.
pub fn centered_unit_states(data: &Dataset) -> Result<Vec<Vec<f64>>> {
    let mu = data.mean();
    let d = data.features();
    (0..data.samples()).map(|i| centered_unit(data.genuine_row(i), &mu[..d])).collect()
}

/// Centered unit test state `unit(x − μ)` for a genuine-width test vector.
pub fn centered_test_state(data: &Dataset, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(data.features(), x.len())?;
    let mu = data.mean();
    centered_unit(x, &mu[..data.features()])
}

/// `C = (1/(M−1)) Σ_i |z^i⟩⟨z^i|` over unit centered states.
pub fn unit_state_covariance(data: &Dataset) -> Result<DMatrix<f64>> {
    let states = centered_unit_states(data)?;
    let d = data.features();
    let mut c = DMatrix::<f64>::zeros(d, d);
    for z in &states {
        let z = DVector::from_column_slice(z);
        c += &z * z.transpose();
    }
    Ok(c / (data.samples() - 1) as f64)
}

/// Proximity `⟨z⁰|I − C|z⁰⟩` with every eigen-direction's `1 − λ` clamped at
/// zero, so the result stays in `[0, 1]` even when `C` has eigenvalues above
/// one.
pub fn proximity_classical(data: &Dataset, z0: &[f64]) -> Result<f64> {
    check_dim(data.features(), z0.len())?;
    let c = unit_state_covariance(data)?;
    let eig = c.symmetric_eigen();
    let z = DVector::from_column_slice(z0);
    let beta = eig.eigenvectors.transpose() * z;
    Ok(beta
        .iter()
        .zip(eig.eigenvalues.iter())
        .map(|(b, l)| b * b * (1.0 - l).max(0.0))
        .sum())
}
