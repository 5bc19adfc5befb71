//! Kernel-PCA style proximity: points along the dominant direction of the
//! training data score near 0, orthogonal ones near 1.

use qad::classical::{centered_test_state, proximity_classical};
use qad::gauss::{build_unit_covariance, proximity_quantum};
use qad::{Dataset, EstimatorMode, NormedVector, PhaseEstimationConfig};

fn main() -> qad::Result<()> {
    let rows: Vec<Vec<f64>> = (0..8)
        .map(|i| {
            let t = i as f64 / 7.0 - 0.5;
            vec![t, 0.5 * t + 0.02 * (i as f64).sin(), 0.01 * (i as f64).cos()]
        })
        .collect();
    let data = Dataset::from_rows(rows, false)?;
    let cov = build_unit_covariance(&data)?;
    println!("covariance eigenvalues: {:?}", cov.covariance_eigenvalues());
    let cfg = PhaseEstimationConfig::new(40, 2.0)?;
    for x in [[0.4, 0.2, 0.0], [0.0, 0.0, 0.5], [-0.3, 0.3, 0.1]] {
        let z0 = centered_test_state(&data, &x)?;
        let c = proximity_classical(&data, &z0)?;
        let q = proximity_quantum(&cov, &NormedVector::from_real(&z0)?, &cfg, &EstimatorMode::Exact)?;
        println!("x = {x:?}: classical {c:.6}, quantum {q:.6}");
    }
    Ok(())
}
