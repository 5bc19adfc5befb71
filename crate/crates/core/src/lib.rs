//! Quantum anomaly detection on a desk-scale statevector simulator.
//!
//! The crate implements two quantum detection pipelines (per-feature density
//! estimation and a multivariate Gaussian model), a phase-estimation based
//! log-determinant estimator and a kernel-PCA style proximity measure. Every
//! quantum estimator has an exact classical counterpart in [`classical`]; in
//! [`EstimatorMode::Exact`] the two agree to round-off.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```bash
//! cargo run -p qad --example statevector_basics
//! cargo run -p qad --example density_detection
//! cargo run -p qad --example gaussian_detection
//! ```

pub mod classical;
pub mod cli;
pub mod density;
pub mod encode;
pub mod error;
pub mod gauss;
pub mod sim;

pub use classical::Label;
pub use encode::{Dataset, LoadOptions, NormedVector};
pub use error::{Error, Result};
pub use sim::{EstimatorMode, PhaseEstimationConfig, SpectralDecomposition, StateVector};
