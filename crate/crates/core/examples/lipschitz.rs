//! How steep the logarithm encoding g(λ) = (ln λ, √(1 − 2 ln λ)) gets on
//! [1/κ, 1], compared with 2κ².

use qad::gauss::g_distance;

fn main() -> qad::Result<()> {
    for kappa in [2.0f64, 4.0, 8.0, 16.0] {
        let lo = 1.0 / kappa;
        let steps = 1_000;
        let mut worst: f64 = 0.0;
        for i in 0..steps {
            let a = lo + (1.0 - lo) * i as f64 / steps as f64;
            let b = a + (1.0 - lo) / steps as f64;
            worst = worst.max(g_distance(a, b)? / (b - a));
        }
        println!("κ = {kappa:>4}: max slope {worst:8.3}, 2κ² = {:6.0}, ratio to κ² {:.3}", 2.0 * kappa * kappa, worst / (kappa * kappa));
    }
    Ok(())
}
