#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

pub fn uniform_vec(rng: &mut ChaCha20Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.iter().map(|a| a / n).collect()
}

/// Orthogonal factor of a random square matrix; columns are the basis.
pub fn random_orthogonal(rng: &mut ChaCha20Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    a.qr().q()
}

pub fn random_unitary(rng: &mut ChaCha20Rng, n: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    a.qr().q()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn lu_determinant(a: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut m = a.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().partial_cmp(&m[(j, col)].norm()).unwrap())
            .unwrap();
        if m[(pivot, col)].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap_rows(pivot, col);
            det = -det;
        }
        let p = m[(col, col)];
        det *= p;
        for r in col + 1..n {
            let f = m[(r, col)] / p;
            for c in col..n {
                let v = m[(col, c)];
                m[(r, c)] -= f * v;
            }
        }
    }
    det
}

/// `(1/M²) Σ_{k,l} ⟨x^k|x^l⟩`
pub fn gram_sum(rows: &[Vec<f64>]) -> f64 {
    let m = rows.len() as f64;
    let mut acc = 0.0;
    for a in rows {
        for b in rows {
            acc += a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        }
    }
    acc / (m * m)
}

/// Rows `±q_k`, each sign repeated `parts[k]` times, for the columns `q_k`
/// of `basis`. With `Σ parts` a power of two the unit-trace covariance has
/// the dyadic spectrum `parts[k] / Σ parts` and the mean is exactly zero.
pub fn signed_rows(basis: &DMatrix<f64>, parts: &[usize]) -> Vec<Vec<f64>> {
    let mut rows = Vec::new();
    for (k, &reps) in parts.iter().enumerate() {
        let q: Vec<f64> = basis.column(k).iter().copied().collect();
        for _ in 0..reps {
            rows.push(q.clone());
            rows.push(q.iter().map(|a| -a).collect());
        }
    }
    rows
}

/// Random partition of `total` into `d` parts, each at least `min_part`.
pub fn random_parts(rng: &mut ChaCha20Rng, total: usize, d: usize, min_part: usize) -> Vec<usize> {
    let mut parts = vec![min_part; d];
    for _ in 0..total - d * min_part {
        let k = rng.random_range(0..d);
        parts[k] += 1;
    }
    parts
}

pub fn write_csv(path: &std::path::Path, rows: &[Vec<f64>]) {
    let body: String = rows
        .iter()
        .map(|r| r.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    std::fs::write(path, body).unwrap();
}
