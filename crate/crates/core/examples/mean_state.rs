//! The mean-state preparation succeeds with probability equal to the squared
//! norm of the mean of the training rows.

use qad::density::prepare_mean_state;
use qad::Dataset;

fn main() -> qad::Result<()> {
    let cases = [
        ("identical", vec![vec![0.6, 0.8]; 4]),
        ("orthonormal", (0..4).map(|i| (0..4).map(|j| f64::from(u8::from(i == j))).collect()).collect()),
        ("mixed", vec![vec![1.0, 0.2, -0.3, 0.5], vec![0.1, 0.9, 0.4, -0.2], vec![0.7, 0.7, 0.1, 0.0], vec![-0.2, 0.3, 0.8, 0.4]]),
    ];
    for (name, rows) in cases {
        let data = Dataset::from_rows(rows, true)?;
        let mean = data.mean();
        let expected: f64 = mean.iter().map(|m| m * m).sum();
        let prep = prepare_mean_state(&data)?;
        println!("{name:>12}: P(success) = {:.12}, ‖μ‖² = {expected:.12}", prep.success_probability);
    }
    Ok(())
}
