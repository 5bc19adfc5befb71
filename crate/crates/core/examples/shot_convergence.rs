//! Sampling error of the density pipeline against its exact value, averaged
//! over seeds, for growing shot counts.

use qad::density::{detect_density, LogSigmaBounds};
use qad::{Dataset, EstimatorMode, NormedVector};

fn main() -> qad::Result<()> {
    let data = Dataset::from_rows(
        vec![vec![0.9, 0.2, 0.3, 0.1], vec![0.2, 0.8, 0.4, 0.3], vec![0.5, 0.5, 0.6, 0.2], vec![0.3, 0.4, 0.2, 0.9]],
        true,
    )?;
    let x0 = NormedVector::from_real(&data.test_vector(&[0.4, 0.4, 0.4, 0.4])?)?;
    let exact = detect_density(&data, &x0, 0.05, &EstimatorMode::Exact, LogSigmaBounds::Auto)?.log_p;
    let seeds = 20;
    for shots in [100u64, 1_000, 10_000, 100_000] {
        let mut sq = 0.0;
        for seed in 0..seeds {
            let mode = EstimatorMode::sampled(shots, seed)?;
            let est = detect_density(&data, &x0, 0.05, &mode, LogSigmaBounds::Auto)?.log_p;
            sq += (est - exact).powi(2);
        }
        println!("{shots:>7} shots: RMS error {:.3e}", (sq / seeds as f64).sqrt());
    }
    Ok(())
}
