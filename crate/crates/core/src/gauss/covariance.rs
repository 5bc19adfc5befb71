use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::VARIANCE_FLOOR;
use crate::encode::{Dataset, NormedVector};
use crate::error::{Error, Result};
use crate::sim::SpectralDecomposition;

/// How centered training states enter the covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CenteredWeighting {
    /// `|z^i⟩ = x^i − μ` with its norm: `C` is the sample covariance.
    Raw,
    /// `|z^i⟩` normalized to unit length (kernel-PCA convention).
    Unit,
}

/// Sample covariance `C = (1/(M−1)) Σ_i |z^i⟩⟨z^i|` held as the unit-trace
/// density operator `C / tr(C)` plus the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceOperator {
    pub density: SpectralDecomposition,
    pub trace_c: f64,
    pub samples: usize,
    pub weighting: CenteredWeighting,
}

impl CovarianceOperator {
    /// Builds the operator from centered states, each weighted by its squared
    /// scale (`Raw`) or by one (`Unit`).
    pub fn from_centered_states(states: &[NormedVector], weighting: CenteredWeighting) -> Result<Self> {
        let m = states.len();
        if m < 2 {
            return Err(Error::TooFewSamples(m));
        }
        let n = states[0].len();
        let mut c = DMatrix::<Complex64>::zeros(n, n);
        let mut trace = 0.0;
        for z in states {
            if z.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: z.len() });
            }
            let w = match weighting {
                CenteredWeighting::Raw => z.scale * z.scale,
                CenteredWeighting::Unit => 1.0,
            };
            for r in 0..n {
                for k in 0..n {
                    c[(r, k)] += z.unit[r] * z.unit[k].conj() * w;
                }
            }
            trace += w;
        }
        let divisor = (m - 1) as f64;
        let trace_c = trace / divisor;
        if trace_c < VARIANCE_FLOOR {
            return Err(Error::ZeroVector);
        }
        let density = SpectralDecomposition::hermitian(&(c / Complex64::new(trace, 0.0)))?;
        Ok(Self { density, trace_c, samples: m, weighting })
    }

    pub fn dim(&self) -> usize {
        self.density.dim()
    }

    /// Eigenvalues of `C` itself.
    pub fn covariance_eigenvalues(&self) -> Vec<f64> {
        self.density.eigenvalues().iter().map(|l| l * self.trace_c).collect()
    }
}

fn centered_rows(data: &Dataset) -> Vec<Vec<f64>> {
    let d = data.features();
    let mu = data.mean();
    (0..data.samples())
        .map(|i| data.genuine_row(i).iter().zip(&mu[..d]).map(|(x, u)| x - u).collect())
        .collect()
}

/// Covariance of the centered training rows over genuine features.
pub fn build_covariance(data: &Dataset) -> Result<CovarianceOperator> {
    let m = data.samples();
    let states: Vec<NormedVector> = centered_rows(data)
        .into_iter()
        .map(|z| {
            NormedVector::from_real(&z).or_else(|_| {
                // a row sitting on the mean contributes nothing
                Ok(NormedVector { unit: vec![Complex64::new(0.0, 0.0); z.len()], scale: 0.0 })
            })
        })
        .collect::<Result<_>>()?;
    debug_assert_eq!(states.len(), m);
    CovarianceOperator::from_centered_states(&states, CenteredWeighting::Raw)
}

/// Covariance of unit-normalized centered rows, the operator behind the
/// proximity measure.
pub fn build_unit_covariance(data: &Dataset) -> Result<CovarianceOperator> {
    let states = centered_rows(data)
        .into_iter()
        .map(|z| NormedVector::from_real(&z))
        .collect::<Result<Vec<_>>>()?;
    CovarianceOperator::from_centered_states(&states, CenteredWeighting::Unit)
}

/// `(x − μ)` as a normalized state with its norm as scale.
pub fn prepare_centered_state(x: &NormedVector, mu: &[f64]) -> Result<NormedVector> {
    if x.len() != mu.len() {
        return Err(Error::DimensionMismatch { expected: mu.len(), actual: x.len() });
    }
    let z: Vec<Complex64> = x.raw().iter().zip(mu).map(|(a, &u)| a - u).collect();
    let norm = z.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < VARIANCE_FLOOR {
        return Err(Error::ZeroVector);
    }
    NormedVector::from_complex(z)
}
