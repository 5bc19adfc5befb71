//! Statevector simulator: named registers, Hadamard layers, ancilla
//! rotations, post-selection, measurement and idealized phase estimation.

mod mode;
mod spectral;
mod state;

pub use mode::EstimatorMode;
pub use spectral::{
    ideal_phase_estimation, phase_estimate_register, qubits_for, round_to_bits, PhaseComponent,
    PhaseEstimationConfig, SpectralDecomposition,
};
pub use state::{Register, StateVector, POSTSELECT_FLOOR};
