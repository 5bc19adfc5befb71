//! Registers, Hadamard layers, a conditional ancilla rotation, post-selection
//! and shot sampling on a three-qubit state.

use qad::sim::Register;
use qad::{EstimatorMode, StateVector};

fn main() -> qad::Result<()> {
    let state = StateVector::zero(vec![Register::new("a", 1), Register::new("b", 2)]);
    let state = state.hadamard_register("b")?;
    println!("after H on b: marginal(b) = {:?}", state.marginal("b")?);

    // rotate an ancilla by f(b) = b/3
    let rotated = state.attach_ancilla_rotation("b", "anc", |b| b as f64 / 3.0)?;
    let p0 = rotated.expectation("anc", 0)?;
    println!("P(anc = 0) = {p0:.6} (expected {:.6})", (0.0 + 1.0 + 4.0 + 9.0) / 9.0 / 4.0);

    let (kept, p) = rotated.postselect("anc", 0)?;
    println!("post-selected with probability {p:.6}; marginal(b) = {:?}", kept.marginal("b")?);

    for shots in [100, 10_000] {
        let mode = EstimatorMode::sampled(shots, 7)?;
        println!("{shots:>6} shots: {:.4}", rotated.sample_expectation("anc", 0, &mode)?);
    }
    Ok(())
}
