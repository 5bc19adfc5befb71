//! Hermitian eigendecomposition and idealized phase estimation.
//!
//! Phase estimation here is leakage-free: every eigencomponent lands on its
//! eigenvalue rounded to `bits` binary digits. Eigenvectors whose rounded
//! eigenvalues coincide are indistinguishable to the measurement and are
//! merged into a single outcome.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::{l2_norm, Register, StateVector, POSTSELECT_FLOOR};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const ORTHONORMAL_TOL: f64 = 1e-10;
const UNIT_TOL: f64 = 1e-10;
/// Slack on the `[0, 1]` eigenvalue range accepted by phase estimation.
const RANGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    eigenvectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    /// Diagonalizes a Hermitian matrix. Eigenvalues come back descending.
    pub fn hermitian(matrix: &DMatrix<Complex64>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: matrix.ncols() });
        }
        let scale = matrix.iter().map(|a| a.norm()).fold(1.0, f64::max);
        let asym = (matrix - matrix.adjoint()).iter().map(|a| a.norm()).fold(0.0, f64::max);
        if asym > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(asym));
        }
        let sym = (matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = sym.symmetric_eigen();
        Ok(Self::sorted(eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
    }

    pub fn real_symmetric(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::hermitian(&matrix.map(|x| Complex64::new(x, 0.0)))
    }

    /// Wraps a known eigensystem after checking orthonormality.
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: DMatrix<Complex64>) -> Result<Self> {
        let n = eigenvalues.len();
        if eigenvectors.nrows() != n || eigenvectors.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: eigenvectors.ncols() });
        }
        let gram = eigenvectors.adjoint() * &eigenvectors;
        let dev = (gram - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|a| a.norm())
            .fold(0.0, f64::max);
        if dev > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self::sorted(eigenvalues, eigenvectors))
    }

    fn sorted(eigenvalues: Vec<f64>, vectors: DMatrix<Complex64>) -> Self {
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
        let n = vectors.nrows();
        let eigenvectors = DMatrix::from_fn(n, order.len(), |r, c| vectors[(r, order[c])]);
        Self { eigenvalues: order.iter().map(|&k| eigenvalues[k]).collect(), eigenvectors }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// `Σ_k λ_k u_k u_k†`
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)),
        ));
        &self.eigenvectors * lambda * self.eigenvectors.adjoint()
    }

    /// Same eigenvectors, eigenvalues multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for l in &mut out.eigenvalues {
            *l *= factor;
        }
        if factor < 0.0 {
            out = Self::sorted(out.eigenvalues, out.eigenvectors);
        }
        out
    }

    /// Overlaps `⟨u_k|v⟩` for every eigenvector.
    pub fn coefficients(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim())
            .map(|k| self.eigenvectors.column(k).iter().zip(v).map(|(u, x)| u.conj() * x).sum())
            .collect()
    }

    fn check_unit_interval(&self) -> Result<()> {
        for &l in &self.eigenvalues {
            if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&l) {
                return Err(Error::EigenvalueOutOfRange { value: l, lo: 0.0, hi: 1.0 });
            }
        }
        Ok(())
    }

    /// Distinct rounded eigenvalues (descending) with the eigenvector indices
    /// that round onto each.
    fn phase_groups(&self, bits: u32) -> Vec<(f64, Vec<usize>)> {
        let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            let r = round_to_bits(l, bits);
            match groups.iter_mut().find(|(v, _)| *v == r) {
                Some((_, members)) => members.push(k),
                None => groups.push((r, vec![k])),
            }
        }
        groups.sort_by(|a, b| b.0.total_cmp(&a.0));
        groups
    }
}

/// Rounds `λ` to the nearest multiple of `2^{-bits}`, clamped to `[0, 1]`.
pub fn round_to_bits(lambda: f64, bits: u32) -> f64 {
    let scale = (bits as f64).exp2();
    ((lambda * scale).round() / scale).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimationConfig {
    pub bits: u32,
    /// Effective condition number: eigenvalues below `1/kappa` are ignored.
    pub kappa: f64,
}

impl PhaseEstimationConfig {
    /// Rounding finer than 52 bits is below f64 resolution on `[0, 1]`.
    pub const MAX_BITS: u32 = 52;

    pub fn new(bits: u32, kappa: f64) -> Result<Self> {
        if bits == 0 || bits > Self::MAX_BITS {
            return Err(Error::InvalidConfig(format!(
                "phase estimation bits must be in 1..={}, got {bits}",
                Self::MAX_BITS
            )));
        }
        if !(kappa.is_finite() && kappa >= 1.0) {
            return Err(Error::InvalidConfig(format!("kappa must be >= 1, got {kappa}")));
        }
        Ok(Self { bits, kappa })
    }
}

/// One measurable outcome of phase estimation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseComponent {
    /// Eigenvalue rounded to the configured precision.
    pub eigenvalue: f64,
    /// `Σ β_j²` over eigenvectors sharing this rounded eigenvalue.
    pub weight: f64,
    /// Representative (first) eigenvector index of the group.
    pub eigenvector: usize,
}

/// Idealized phase estimation of `op` on a pure input.
///
/// Outcomes with weight indistinguishable from zero are omitted.
pub fn ideal_phase_estimation(
    op: &SpectralDecomposition,
    input: &[Complex64],
    config: &PhaseEstimationConfig,
) -> Result<Vec<PhaseComponent>> {
    op.check_unit_interval()?;
    if input.len() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), actual: input.len() });
    }
    let norm = l2_norm(input);
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnitNorm(norm));
    }
    let beta = op.coefficients(input);
    Ok(op
        .phase_groups(config.bits)
        .into_iter()
        .map(|(eigenvalue, members)| PhaseComponent {
            eigenvalue,
            weight: members.iter().map(|&k| beta[k].norm_sqr()).sum(),
            eigenvector: members[0],
        })
        .filter(|c| c.weight > POSTSELECT_FLOOR)
        .collect())
}

/// Runs idealized phase estimation of `op` on register `target` of `state`,
/// prepending an outcome register named `outcome_register`.
///
/// Outcome `c` of the new register carries `(P_c ⊗ I)|ψ⟩`, where `P_c`
/// projects onto the eigenvectors whose rounded eigenvalue is `table[c]`.
/// The register stores outcome labels rather than the binary expansion of the
/// eigenvalue; the returned table decodes them. `op` may act on a leading
/// subspace of the register, in which case the state must have no weight
/// outside it.
pub fn phase_estimate_register(
    op: &SpectralDecomposition,
    state: &StateVector,
    target: &str,
    outcome_register: &str,
    config: &PhaseEstimationConfig,
) -> Result<(StateVector, Vec<f64>)> {
    op.check_unit_interval()?;
    let layout = state.layout();
    let pos = layout
        .iter()
        .position(|r| r.name == target)
        .ok_or_else(|| Error::UnknownRegister(target.to_string()))?;
    let dim = layout[pos].dim();
    let n = op.dim();
    if n > dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: n });
    }
    let shift: usize = layout[pos + 1..].iter().map(|r| r.qubits).sum();
    let low_count = 1usize << shift;
    let high_count = state.amplitudes().len() / (dim * low_count);

    let groups = op.phase_groups(config.bits);
    let label_qubits = qubits_for(groups.len());
    let block = state.amplitudes().len();
    let mut amps = vec![Complex64::new(0.0, 0.0); block << label_qubits];
    let mut outside = 0.0;

    let mut slice = vec![Complex64::new(0.0, 0.0); dim];
    for high in 0..high_count {
        for low in 0..low_count {
            let index = |i: usize| ((high * dim + i) << shift) | low;
            for (i, s) in slice.iter_mut().enumerate() {
                *s = state.amplitudes()[index(i)];
            }
            outside += slice[n..].iter().map(|a| a.norm_sqr()).sum::<f64>();
            let beta = op.coefficients(&slice[..n]);
            for (c, (_, members)) in groups.iter().enumerate() {
                for &k in members {
                    let u = op.eigenvectors.column(k);
                    for i in 0..n {
                        amps[c * block + index(i)] += beta[k] * u[i];
                    }
                }
            }
        }
    }
    if outside > POSTSELECT_FLOOR {
        return Err(Error::DimensionMismatch { expected: n, actual: dim });
    }

    let mut new_layout = vec![Register::new(outcome_register, label_qubits)];
    new_layout.extend(layout.iter().cloned());
    let table = groups.into_iter().map(|(v, _)| v).collect();
    Ok((StateVector::new(amps, new_layout)?, table))
}

/// Smallest qubit count whose register holds `n` basis states.
pub fn qubits_for(n: usize) -> usize {
    n.max(1).next_power_of_two().trailing_zeros() as usize
}
