//! Per-feature Gaussian density detection, classical and simulated quantum,
//! on the bundled sensor readings.

use std::fs::File;

use qad::classical::{classify_density, fit_density};
use qad::density::{detect_density, LogSigmaBounds};
use qad::encode::{load_dataset, read_rows};
use qad::{EstimatorMode, LoadOptions, NormedVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let options = LoadOptions { header: true, ..LoadOptions::default() };
    let data = load_dataset(File::open(format!("{dir}/sensors.csv"))?, &options)?;
    let probe = read_rows(File::open(format!("{dir}/probe.csv"))?, true)?.remove(0);
    let model = fit_density(&data)?;
    let epsilon = 0.05;

    let mut points: Vec<(String, Vec<f64>)> = vec![("probe".into(), probe)];
    points.extend((0..3).map(|i| (format!("row {i}"), data.genuine_row(i).to_vec())));
    for (name, x) in points {
        let v = data.test_vector(&x)?;
        let (label, log_p) = classify_density(&model, &v[..data.features()], epsilon)?;
        let x0 = NormedVector::from_real(&v)?;
        let exact = detect_density(&data, &x0, epsilon, &EstimatorMode::Exact, LogSigmaBounds::Auto)?;
        let sampled =
            detect_density(&data, &x0, epsilon, &EstimatorMode::sampled(20_000, 1)?, LogSigmaBounds::Auto)?;
        println!(
            "{name:>6}: classical ln p = {log_p:10.4} ({label:?}), exact {:10.4} ({:?}), 20k shots {:10.4}",
            exact.log_p, exact.label, sampled.log_p
        );
    }
    Ok(())
}
