//! Log-determinant estimation by phase estimation on a maximally entangled
//! input.
//!
//! Feeding `(1/√N) Σ_i |i⟩|i⟩` into phase estimation gives every eigenvector
//! the same weight `1/N`, so an ancilla rotated by `√h(λ̃)` with
//! `h(λ) = −ln λ / ln κ ∈ [0, 1]` reads `P(0) = −Σ_i ln λ̃_i / (N ln κ)`.

use num_complex::Complex64;

use super::{ANCILLA, PHASE, REFERENCE, SYSTEM};
use crate::error::{Error, Result};
use crate::sim::{
    phase_estimate_register, qubits_for, EstimatorMode, PhaseEstimationConfig, Register,
    SpectralDecomposition, StateVector,
};

const RANGE_SLACK: f64 = 1e-12;

/// `Σ_i ln λ̃_i` for an operator whose spectrum lies in `[1/κ, 1]`.
pub fn estimate_log_det(
    op: &SpectralDecomposition,
    config: &PhaseEstimationConfig,
    mode: &EstimatorMode,
) -> Result<f64> {
    let floor = 1.0 / config.kappa;
    for &l in op.eigenvalues() {
        if l < floor - RANGE_SLACK || l > 1.0 + RANGE_SLACK {
            return Err(Error::EigenvalueOutOfRange { value: l, lo: floor, hi: 1.0 });
        }
    }
    let n = op.dim();
    let q = qubits_for(n);
    let width = 1usize << q;
    let mut amps = vec![Complex64::new(0.0, 0.0); width * width];
    for i in 0..n {
        amps[i * width + i] = Complex64::new(1.0, 0.0);
    }
    let input = StateVector::new(amps, vec![Register::new(SYSTEM, q), Register::new(REFERENCE, q)])?;
    if config.kappa == 1.0 {
        // the whole spectrum is pinned at 1
        return Ok(0.0);
    }

    let (state, table) = phase_estimate_register(op, &input, SYSTEM, PHASE, config)?;
    let ln_kappa = config.kappa.ln();
    let rotated = state.attach_ancilla_rotation(PHASE, ANCILLA, |c| {
        // rounding can step just outside [1/κ, 1]; clamping moves it back toward λ
        let l = table[c].clamp(floor, 1.0);
        (-l.ln() / ln_kappa).clamp(0.0, 1.0).sqrt()
    })?;
    let p0 = rotated.sample_expectation(ANCILLA, 0, mode)?;
    Ok(-(n as f64) * ln_kappa * p0)
}

/// Rescales `op` so its largest eigenvalue is one. Returns the rescaled
/// operator, the factor `s`, and the smallest `κ` that admits it.
pub fn scale_into_unit_interval(op: &SpectralDecomposition) -> Result<(SpectralDecomposition, f64, f64)> {
    let max = op.eigenvalues().first().copied().unwrap_or(0.0);
    let min = op.eigenvalues().last().copied().unwrap_or(0.0);
    if min <= 0.0 {
        return Err(Error::EigenvalueOutOfRange { value: min, lo: f64::MIN_POSITIVE, hi: f64::INFINITY });
    }
    let s = 1.0 / max;
    Ok((op.scaled(s), s, max / min))
}

/// Undoes a rescaling: `ln|B| = ln|sB| − N ln s`.
pub fn log_det_of_scaled(scaled_log_det: f64, n: usize, s: f64) -> f64 {
    scaled_log_det - n as f64 * s.ln()
}
