//! Log-determinant of a random Hermitian operator with spectrum in
//! [1/κ, 1], against the exact value, as the phase-estimation precision grows.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qad::gauss::estimate_log_det;
use qad::{EstimatorMode, PhaseEstimationConfig, SpectralDecomposition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn main() -> qad::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let (n, kappa) = (8, 4.0);
    let spectrum: Vec<f64> = (0..n).map(|_| rng.random_range(1.0 / kappa..=1.0)).collect();
    let u = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .qr()
        .q();
    let d = DMatrix::from_diagonal(&DVector::from_iterator(n, spectrum.iter().map(|&l| Complex64::new(l, 0.0))));
    let op = SpectralDecomposition::hermitian(&(&u * d * u.adjoint()))?;
    let exact: f64 = spectrum.iter().map(|l| l.ln()).sum();
    println!("exact ln det = {exact:.9}");
    for bits in [2, 4, 6, 8, 12, 16] {
        let cfg = PhaseEstimationConfig::new(bits, kappa)?;
        let est = estimate_log_det(&op, &cfg, &EstimatorMode::Exact)?;
        let bound = n as f64 * kappa * (-(bits as f64)).exp2();
        println!("bits {bits:>2}: {est:.9}  error {:.2e}  bound {bound:.2e}", (est - exact).abs());
    }
    Ok(())
}
