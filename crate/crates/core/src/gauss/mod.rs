//! Quantum anomaly detection under a multivariate Gaussian model.
//!
//! The covariance is held as the unit-trace operator `𝒞 = C / tr C`. Phase
//! estimation on `𝒞` followed by an eigenvalue-dependent ancilla rotation
//! gives the Mahalanobis distance (rotation `√(1/(κλ̃))`), the
//! log-determinant (see [`estimate_log_det`]) and the kernel-PCA proximity
//! (rotation `√(1 − λ̃ tr C)`).

mod covariance;
mod determinant;
mod precision;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use covariance::{
    build_covariance, build_unit_covariance, prepare_centered_state, CenteredWeighting,
    CovarianceOperator,
};
pub use determinant::{estimate_log_det, log_det_of_scaled, scale_into_unit_interval};
pub use precision::{g_distance, g_map, precision_for};

use crate::classical::{gaussian_threshold, label_if_above, Label};
use crate::encode::{Dataset, NormedVector};
use crate::error::{Error, Result};
use crate::sim::{
    phase_estimate_register, qubits_for, EstimatorMode, PhaseEstimationConfig, Register,
    StateVector, POSTSELECT_FLOOR,
};

pub const SYSTEM: &str = "sys";
pub const REFERENCE: &str = "ref";
pub const PHASE: &str = "phase";
pub const ANCILLA: &str = "ancilla";

/// `1/κ` with a hair of slack so that dyadic eigenvalues sitting exactly on
/// the cut survive round-off.
fn cutoff(kappa: f64) -> f64 {
    1.0 / kappa - 1e-15
}

fn system_state(z: &NormedVector, n: usize) -> Result<StateVector> {
    if z.len() < n {
        return Err(Error::DimensionMismatch { expected: n, actual: z.len() });
    }
    let q = qubits_for(z.len());
    let mut amps = z.unit.clone();
    amps.resize(1 << q, Complex64::new(0.0, 0.0));
    StateVector::new(amps, vec![Register::new(SYSTEM, q)])
}

/// Mahalanobis estimate of a centered test state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PTestEstimate {
    pub p_test: f64,
    /// Weight on eigen-directions below `1/κ`, dropped by the rotation.
    pub discarded_weight: f64,
}

/// `p_test = z⁰ᵀ C⁻¹ z⁰` via `κ · P(ancilla = 0) · ‖z⁰‖² / tr C`.
pub fn estimate_ptest(
    cov: &CovarianceOperator,
    z0: &NormedVector,
    config: &PhaseEstimationConfig,
    mode: &EstimatorMode,
) -> Result<PTestEstimate> {
    let input = system_state(z0, cov.dim())?;
    let (state, table) = phase_estimate_register(&cov.density, &input, SYSTEM, PHASE, config)?;
    let cut = cutoff(config.kappa);
    let weights = state.marginal(PHASE)?;
    let kept: f64 = weights.iter().zip(&table).filter(|(_, &l)| l >= cut).map(|(w, _)| w).sum();
    if kept <= POSTSELECT_FLOOR {
        return Err(Error::AllWeightDiscarded);
    }
    let kappa = config.kappa;
    let rotated = state.attach_ancilla_rotation(PHASE, ANCILLA, |c| {
        let l = table[c];
        if l >= cut {
            (1.0 / (kappa * l)).min(1.0).sqrt()
        } else {
            0.0
        }
    })?;
    let p0 = rotated.sample_expectation(ANCILLA, 0, mode)?;
    Ok(PTestEstimate {
        p_test: kappa * p0 * z0.scale * z0.scale / cov.trace_c,
        discarded_weight: (1.0 - kept).max(0.0),
    })
}

/// `⟨z⁰|I − C|z⁰⟩` for a unit test state, with each direction's `1 − μ̃`
/// clamped at zero.
pub fn proximity_quantum(
    cov: &CovarianceOperator,
    z0: &NormedVector,
    config: &PhaseEstimationConfig,
    mode: &EstimatorMode,
) -> Result<f64> {
    let input = system_state(z0, cov.dim())?;
    let (state, table) = phase_estimate_register(&cov.density, &input, SYSTEM, PHASE, config)?;
    let trace = cov.trace_c;
    let rotated = state.attach_ancilla_rotation(PHASE, ANCILLA, |c| (1.0 - table[c] * trace).clamp(0.0, 1.0).sqrt())?;
    rotated.sample_expectation(ANCILLA, 0, mode)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussQuantumReport {
    pub p_test: f64,
    /// `ln |C|`
    pub log_det: f64,
    pub threshold: f64,
    pub label: Label,
    pub discarded_weight: f64,
    pub config: PhaseEstimationConfig,
    pub mode: EstimatorMode,
}

/// Full Gaussian pipeline on a unit-row dataset. `x0` is a padded test vector
/// in the dataset's frame.
pub fn detect_gaussian(
    data: &Dataset,
    x0: &NormedVector,
    epsilon: f64,
    config: &PhaseEstimationConfig,
    mode: &EstimatorMode,
) -> Result<GaussQuantumReport> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidConfig(format!("epsilon must be positive, got {epsilon}")));
    }
    data.require_unit_rows()?;
    let cov = build_covariance(data)?;
    let estimate = match prepare_centered_state(x0, &data.mean()) {
        Ok(z0) => estimate_ptest(&cov, &z0, config, &mode.fork(1))?,
        Err(Error::ZeroVector) => PTestEstimate { p_test: 0.0, discarded_weight: 0.0 },
        Err(e) => return Err(e),
    };
    let d = data.features();
    let log_det = estimate_log_det(&cov.density, config, &mode.fork(2))? + d as f64 * cov.trace_c.ln();
    let threshold = gaussian_threshold(d, log_det, epsilon);
    Ok(GaussQuantumReport {
        p_test: estimate.p_test,
        log_det,
        threshold,
        label: label_if_above(estimate.p_test, threshold),
        discarded_weight: estimate.discarded_weight,
        config: *config,
        mode: *mode,
    })
}
