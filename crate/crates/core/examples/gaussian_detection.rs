//! Multivariate Gaussian detection: Mahalanobis distance and log-determinant
//! from phase estimation on the unit-trace covariance.

use std::fs::File;

use qad::classical::{classify_gaussian, fit_gaussian_with, CovarianceDivisor};
use qad::encode::load_dataset;
use qad::gauss::{detect_gaussian, precision_for};
use qad::{EstimatorMode, LoadOptions, NormedVector, PhaseEstimationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/rotated.csv");
    let data = load_dataset(File::open(path)?, &LoadOptions::default())?;
    let model = fit_gaussian_with(&data, CovarianceDivisor::Sample)?;
    let kappa = 4.0;
    let epsilon = 0.02;
    println!("classical ln|C| = {:.6}", model.logdet);

    for bits in [2, 3, precision_for(0.01, kappa)?] {
        let cfg = PhaseEstimationConfig::new(bits, kappa)?;
        for x in [[0.5, 0.5, 0.7], [0.1, -0.2, 0.97], [0.9, -0.4, 0.1]] {
            let v = data.test_vector(&x)?;
            let (label, p_test, _) = classify_gaussian(&model, &v[..3], epsilon)?;
            let q = detect_gaussian(&data, &NormedVector::from_real(&v)?, epsilon, &cfg, &EstimatorMode::Exact)?;
            println!(
                "bits {bits:>2} x = {x:?}: p_test classical {p_test:.6} ({label:?}) quantum {:.6} ({:?}), ln|C| {:.6}",
                q.p_test, q.label, q.log_det
            );
        }
    }
    Ok(())
}
