use crate::error::{Error, Result};

/// Phase-estimation bits for a target error `ε` at condition number `κ`:
/// `δ = ε / (2κ²)`, `bits = ⌈log₂(1/δ)⌉`, at least one.
pub fn precision_for(target_error: f64, kappa: f64) -> Result<u32> {
    if !(target_error > 0.0 && target_error.is_finite()) {
        return Err(Error::InvalidConfig(format!("target error must be positive, got {target_error}")));
    }
    if !(kappa >= 1.0 && kappa.is_finite()) {
        return Err(Error::InvalidConfig(format!("kappa must be >= 1, got {kappa}")));
    }
    let delta = target_error / (2.0 * kappa * kappa);
    // shave round-off so exact powers of two do not spill into the next bit
    let bits = ((1.0 / delta).log2() - 1e-12).ceil();
    Ok(bits.max(1.0) as u32)
}

/// `λ ↦ (ln λ, √(1 − 2 ln λ))`, the unnormalized logarithm encoding whose
/// Lipschitz constant bounds how phase-estimation error propagates.
pub fn g_map(lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::EigenvalueOutOfRange { value: lambda, lo: 0.0, hi: 1.0 });
    }
    let l = lambda.ln();
    Ok((l, (1.0 - 2.0 * l).sqrt()))
}

/// `‖g(a) − g(b)‖₂`
pub fn g_distance(a: f64, b: f64) -> Result<f64> {
    let (a0, a1) = g_map(a)?;
    let (b0, b1) = g_map(b)?;
    Ok(((a0 - b0).powi(2) + (a1 - b1).powi(2)).sqrt())
}
