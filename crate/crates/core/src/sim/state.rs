//! Multi-register statevector.
//!
//! Registers are laid out big-endian: the first register in the layout holds
//! the most significant bits of the basis index, so a layout `[a, b]` stores
//! `|a⟩|b⟩` at index `a * dim(b) + b`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mode::EstimatorMode;
use crate::error::{Error, Result};

/// Probability below which a post-selected branch counts as empty.
pub const POSTSELECT_FLOOR: f64 = 1e-14;

/// Slack allowed on rotation amplitudes before `|f| > 1` is reported.
const ROTATION_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub qubits: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, qubits: usize) -> Self {
        Self { name: name.into(), qubits }
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }
}

/// Normalized amplitudes over an ordered list of named registers.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    layout: Vec<Register>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, dividing by their ℓ2 norm.
    pub fn new(amplitudes: Vec<Complex64>, layout: Vec<Register>) -> Result<Self> {
        for (i, reg) in layout.iter().enumerate() {
            if layout[..i].iter().any(|r| r.name == reg.name) {
                return Err(Error::DuplicateRegister(reg.name.clone()));
            }
        }
        let expected: usize = 1 << layout.iter().map(|r| r.qubits).sum::<usize>();
        if amplitudes.len() != expected {
            return Err(Error::LayoutMismatch { expected, actual: amplitudes.len() });
        }
        let norm = l2_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self { amplitudes, layout })
    }

    /// Convenience constructor for real amplitudes.
    pub fn from_real(amplitudes: &[f64], layout: Vec<Register>) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect(), layout)
    }

    /// `|0…0⟩` over the given layout.
    pub fn zero(layout: Vec<Register>) -> Self {
        let n: usize = 1 << layout.iter().map(|r| r.qubits).sum::<usize>();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { amplitudes, layout }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn layout(&self) -> &[Register] {
        &self.layout
    }

    pub fn total_qubits(&self) -> usize {
        self.layout.iter().map(|r| r.qubits).sum()
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    pub fn register(&self, name: &str) -> Result<&Register> {
        self.layout
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    /// Bit offset and dimension of a register within the global index.
    fn locate(&self, name: &str) -> Result<(usize, usize, usize)> {
        let pos = self
            .layout
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))?;
        let shift = self.layout[pos + 1..].iter().map(|r| r.qubits).sum();
        Ok((pos, shift, self.layout[pos].dim()))
    }

    fn check_outcome(&self, register: &str, outcome: usize) -> Result<(usize, usize, usize)> {
        let (pos, shift, dim) = self.locate(register)?;
        if outcome >= dim {
            return Err(Error::InvalidOutcome { register: register.to_string(), outcome, dim });
        }
        Ok((pos, shift, dim))
    }

    /// Applies `H` to every qubit of `register`.
    pub fn hadamard_register(&self, register: &str) -> Result<Self> {
        let (pos, shift, _) = self.locate(register)?;
        let mut amps = self.amplitudes.clone();
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        for q in 0..self.layout[pos].qubits {
            let bit = 1usize << (shift + q);
            for idx in 0..amps.len() {
                if idx & bit == 0 {
                    let a = amps[idx];
                    let b = amps[idx | bit];
                    amps[idx] = (a + b) * scale;
                    amps[idx | bit] = (a - b) * scale;
                }
            }
        }
        Ok(Self { amplitudes: amps, layout: self.layout.clone() })
    }

    /// Appends a one-qubit register `ancilla` and rotates it, conditioned on
    /// the basis value `j` of `control`, into `f(j)|0⟩ + √(1 − f(j)²)|1⟩`.
    ///
    /// `f` is only evaluated on populated control values.
    pub fn attach_ancilla_rotation<F>(&self, control: &str, ancilla: &str, f: F) -> Result<Self>
    where
        F: Fn(usize) -> f64,
    {
        if self.layout.iter().any(|r| r.name == ancilla) {
            return Err(Error::DuplicateRegister(ancilla.to_string()));
        }
        let (_, shift, dim) = self.locate(control)?;
        let mut table: Vec<Option<(f64, f64)>> = vec![None; dim];
        let mut amps = Vec::with_capacity(self.amplitudes.len() * 2);
        for (idx, &a) in self.amplitudes.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                amps.push(Complex64::new(0.0, 0.0));
                amps.push(Complex64::new(0.0, 0.0));
                continue;
            }
            let j = (idx >> shift) & (dim - 1);
            let (c0, c1) = match table[j] {
                Some(pair) => pair,
                None => {
                    let v = f(j);
                    if !v.is_finite() || v.abs() > 1.0 + ROTATION_SLACK {
                        return Err(Error::RotationOutOfRange { index: j, value: v });
                    }
                    let v = v.clamp(-1.0, 1.0);
                    let pair = (v, (1.0 - v * v).max(0.0).sqrt());
                    table[j] = Some(pair);
                    pair
                }
            };
            amps.push(a * c0);
            amps.push(a * c1);
        }
        let mut layout = self.layout.clone();
        layout.push(Register::new(ancilla, 1));
        Ok(Self { amplitudes: amps, layout })
    }

    /// Marginal outcome distribution of one register.
    pub fn marginal(&self, register: &str) -> Result<Vec<f64>> {
        let (_, shift, dim) = self.locate(register)?;
        let mut probs = vec![0.0; dim];
        for (idx, a) in self.amplitudes.iter().enumerate() {
            probs[(idx >> shift) & (dim - 1)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Exact Born probability of observing `outcome` on `register`.
    pub fn expectation(&self, register: &str, outcome: usize) -> Result<f64> {
        self.check_outcome(register, outcome)?;
        Ok(self.marginal(register)?[outcome])
    }

    /// Probability estimate under `mode`: exact, or the observed frequency
    /// over simulated shots.
    pub fn sample_expectation(
        &self,
        register: &str,
        outcome: usize,
        mode: &EstimatorMode,
    ) -> Result<f64> {
        self.check_outcome(register, outcome)?;
        match mode {
            EstimatorMode::Exact => self.expectation(register, outcome),
            EstimatorMode::Sampled { shots, .. } => {
                let marginal = self.marginal(register)?;
                let mut rng = mode.rng();
                let hits = super::mode::sample_counts(&marginal, *shots, &mut rng)[outcome];
                Ok(hits as f64 / *shots as f64)
            }
        }
    }

    /// Projects `register` onto `outcome`, removes it from the layout and
    /// renormalizes. Returns the post-selected state and the probability of
    /// the projection.
    pub fn postselect(&self, register: &str, outcome: usize) -> Result<(Self, f64)> {
        let (pos, shift, dim) = self.check_outcome(register, outcome)?;
        let low_mask = (1usize << shift) - 1;
        let kept_len = self.amplitudes.len() / dim;
        let mut amps = Vec::with_capacity(kept_len);
        for k in 0..kept_len {
            let high = k >> shift;
            let low = k & low_mask;
            let idx = (((high * dim) + outcome) << shift) | low;
            amps.push(self.amplitudes[idx]);
        }
        let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if probability < POSTSELECT_FLOOR {
            return Err(Error::EmptyBranch { probability });
        }
        let norm = probability.sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        let mut layout = self.layout.clone();
        layout.remove(pos);
        Ok((Self { amplitudes: amps, layout }, probability))
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut layout = self.layout.clone();
        for reg in &other.layout {
            if layout.iter().any(|r| r.name == reg.name) {
                return Err(Error::DuplicateRegister(reg.name.clone()));
            }
            layout.push(reg.clone());
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self { amplitudes, layout })
    }
}

pub(crate) fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
