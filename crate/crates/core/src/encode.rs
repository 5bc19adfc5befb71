//! Dataset ingestion and amplitude encoding.
//!
//! Rows are ℓ2-normalized by default: a pure state cannot carry the scale of
//! the vector it encodes, so classical and quantum detectors only see the
//! same data when both work on unit rows. Feature counts are zero-padded to a
//! power of two; sample counts are never padded, because extra zero rows
//! would move the mean.

use std::io::Read;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{Register, StateVector};

/// Tolerance on `‖row‖ = 1` when a pipeline requires unit rows.
const UNIT_ROW_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadOptions {
    pub normalize_rows: bool,
    /// Skip the first line.
    pub header: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self { normalize_rows: true, header: false }
    }
}

/// Training samples, zero-padded to a power-of-two feature count.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: Vec<Vec<f64>>,
    scales: Vec<f64>,
    features: usize,
    normalized: bool,
}

impl Dataset {
    pub fn from_rows(rows: Vec<Vec<f64>>, normalize_rows: bool) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::TooFewSamples(rows.len()));
        }
        let features = rows[0].len();
        if features == 0 {
            return Err(Error::Parse("rows have no columns".into()));
        }
        let padded = features.next_power_of_two();
        let mut out = Vec::with_capacity(rows.len());
        let mut scales = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != features {
                return Err(Error::Parse(format!(
                    "row {} has {} columns, expected {features}",
                    i + 1,
                    row.len()
                )));
            }
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mut row = row;
            if normalize_rows {
                if norm == 0.0 {
                    return Err(Error::ZeroRow { row: i + 1 });
                }
                row.iter_mut().for_each(|x| *x /= norm);
            }
            row.resize(padded, 0.0);
            scales.push(norm);
            out.push(row);
        }
        Ok(Self { rows: out, scales, features, normalized: normalize_rows })
    }

    /// Number of samples `M`.
    pub fn samples(&self) -> usize {
        self.rows.len()
    }

    /// Number of genuine (unpadded) features.
    pub fn features(&self) -> usize {
        self.features
    }

    pub fn padded_features(&self) -> usize {
        self.rows[0].len()
    }

    pub fn feature_mask(&self) -> Vec<bool> {
        (0..self.padded_features()).map(|j| j < self.features).collect()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Padded row `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// Row `i` restricted to genuine features.
    pub fn genuine_row(&self, i: usize) -> &[f64] {
        &self.rows[i][..self.features]
    }

    /// Pre-normalization ℓ2 norm of each row.
    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Fails unless every row has unit norm.
    pub fn require_unit_rows(&self) -> Result<()> {
        let ok = self.rows.iter().all(|r| {
            let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            (n - 1.0).abs() <= UNIT_ROW_TOL
        });
        if ok {
            Ok(())
        } else {
            Err(Error::RowsNotNormalized)
        }
    }

    /// Brings a test vector into the dataset's frame: genuine features only
    /// on input, padded (and normalized, if the training rows were) on output.
    pub fn test_vector(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.features {
            return Err(Error::DimensionMismatch { expected: self.features, actual: x.len() });
        }
        let mut v = x.to_vec();
        if self.normalized {
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::ZeroVector);
            }
            v.iter_mut().for_each(|a| *a /= norm);
        }
        v.resize(self.padded_features(), 0.0);
        Ok(v)
    }

    /// Per-feature mean `(1/M) Σ_i x^i` over the padded width.
    pub fn mean(&self) -> Vec<f64> {
        let m = self.samples() as f64;
        let mut mu = vec![0.0; self.padded_features()];
        for row in &self.rows {
            for (acc, x) in mu.iter_mut().zip(row) {
                *acc += x;
            }
        }
        mu.iter_mut().for_each(|x| *x /= m);
        mu
    }
}

/// Parses comma-separated numeric rows.
pub fn read_rows<R: Read>(source: R, header: bool) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row = record
            .iter()
            .enumerate()
            .map(|(col, cell)| match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Parse(format!(
                    "line {line}, column {}: '{cell}' is not a finite number",
                    col + 1
                ))),
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn load_dataset<R: Read>(source: R, options: &LoadOptions) -> Result<Dataset> {
    let rows = read_rows(source, options.header)?;
    Dataset::from_rows(rows, options.normalize_rows)
}

/// A unit amplitude vector together with the norm it was divided by.
#[derive(Debug, Clone, PartialEq)]
pub struct NormedVector {
    pub unit: Vec<Complex64>,
    pub scale: f64,
}

impl NormedVector {
    /// Normalizes a vector of any length (no power-of-two requirement).
    pub fn from_complex(v: Vec<Complex64>) -> Result<Self> {
        let scale = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { unit: v.into_iter().map(|a| a / scale).collect(), scale })
    }

    pub fn from_real(v: &[f64]) -> Result<Self> {
        Self::from_complex(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.unit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unit.is_empty()
    }

    /// `scale · unit`
    pub fn raw(&self) -> Vec<Complex64> {
        self.unit.iter().map(|a| a * self.scale).collect()
    }

    /// Real parts of `scale · unit`.
    pub fn raw_real(&self) -> Vec<f64> {
        self.unit.iter().map(|a| a.re * self.scale).collect()
    }
}

/// Amplitude-encodes a real vector whose length is a power of two.
pub fn amplitude_encode(v: &[f64]) -> Result<NormedVector> {
    amplitude_encode_complex(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
}

pub fn amplitude_encode_complex(v: Vec<Complex64>) -> Result<NormedVector> {
    if !v.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(v.len()));
    }
    NormedVector::from_complex(v)
}

pub const FEATURE: &str = "feature";
pub const INDEX: &str = "index";

/// `(1/√M) Σ_i |x^i⟩|i⟩` over a feature register and an index register.
pub fn build_training_superposition(data: &Dataset) -> Result<StateVector> {
    let m = data.samples();
    if !m.is_power_of_two() {
        return Err(Error::SamplesNotPowerOfTwo(m));
    }
    let d = data.padded_features();
    let mut amps = vec![Complex64::new(0.0, 0.0); d * m];
    let inv_sqrt_m = 1.0 / (m as f64).sqrt();
    for (i, row) in data.rows().iter().enumerate() {
        let unit = NormedVector::from_real(row).map_err(|_| Error::ZeroRow { row: i + 1 })?;
        for (j, a) in unit.unit.iter().enumerate() {
            amps[j * m + i] = a * inv_sqrt_m;
        }
    }
    let layout = vec![
        Register::new(FEATURE, d.trailing_zeros() as usize),
        Register::new(INDEX, m.trailing_zeros() as usize),
    ];
    StateVector::new(amps, layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn load(s: &str, normalize: bool) -> Result<Dataset> {
        load_dataset(s.as_bytes(), &LoadOptions { normalize_rows: normalize, header: false })
    }

    #[test]
    fn load_examples() {
        let d = load("1,0\n0,1\n", true).unwrap();
        assert_eq!((d.samples(), d.padded_features()), (2, 2));
        assert_eq!(d.rows(), &[vec![1.0, 0.0], vec![0.0, 1.0]]);

        let d = load("1,2,3\n4,5,6\n", false).unwrap();
        assert_eq!(d.padded_features(), 4);
        assert_eq!(d.feature_mask(), vec![true, true, true, false]);
        assert_eq!(d.row(1), &[4.0, 5.0, 6.0, 0.0]);

        let d = load("3,4\n1,0\n", true).unwrap();
        assert!((d.row(0)[0] - 0.6).abs() < 1e-15 && (d.row(0)[1] - 0.8).abs() < 1e-15);
        assert_eq!(d.scales()[0], 5.0);
    }

    #[test]
    fn load_with_header() {
        let opts = LoadOptions { normalize_rows: false, header: true };
        let d = load_dataset("a,b\n1,2\n3,4\n".as_bytes(), &opts).unwrap();
        assert_eq!(d.samples(), 2);
    }

    #[test]
    fn load_errors() {
        assert!(matches!(load("1,2\n3\n", true), Err(Error::Parse(_))));
        let err = load("1,2\n3,x\n", true).unwrap_err();
        assert!(matches!(&err, Error::Parse(msg) if msg.contains("column 2")), "{err}");
        assert_eq!(load("1,2\n0,0\n", true), Err(Error::ZeroRow { row: 2 }));
        assert!(load("1,2\n0,0\n", false).is_ok());
        assert_eq!(load("1,2\n", true), Err(Error::TooFewSamples(1)));
    }

    #[test]
    fn encode_examples() {
        let e = amplitude_encode(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(e.scale, 1.0);
        assert_eq!(e.unit[0], Complex64::new(1.0, 0.0));

        let e = amplitude_encode(&[2.0; 4]).unwrap();
        assert_eq!(e.scale, 4.0);
        assert!(e.unit.iter().all(|a| (a.re - 0.5).abs() < 1e-15));

        let e = amplitude_encode(&[3.0, 4.0]).unwrap();
        assert_eq!(e.scale, 5.0);
        assert!((e.unit[0].re - 0.6).abs() < 1e-15 && (e.unit[1].re - 0.8).abs() < 1e-15);

        assert_eq!(amplitude_encode(&[0.0, 0.0]), Err(Error::ZeroVector));
        assert_eq!(amplitude_encode(&[1.0, 2.0, 3.0]), Err(Error::NotPowerOfTwo(3)));
    }

    #[test]
    fn superposition_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let d = Dataset::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]], true).unwrap();
        let s = build_training_superposition(&d).unwrap();
        let re: Vec<f64> = s.amplitudes().iter().map(|a| a.re).collect();
        assert!(re.iter().zip([h, 0.0, 0.0, h]).all(|(a, b)| (a - b).abs() < 1e-15));

        let d = Dataset::from_rows(vec![vec![1.0, 0.0], vec![1.0, 0.0]], true).unwrap();
        let s = build_training_superposition(&d).unwrap();
        let re: Vec<f64> = s.amplitudes().iter().map(|a| a.re).collect();
        assert!(re.iter().zip([h, h, 0.0, 0.0]).all(|(a, b)| (a - b).abs() < 1e-15));

        let d = Dataset::from_rows(vec![vec![1.0, 0.0]; 3], true).unwrap();
        assert_eq!(build_training_superposition(&d), Err(Error::SamplesNotPowerOfTwo(3)));
    }

    #[test]
    fn superposition_index_marginal_is_uniform() {
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| ((i * 4 + j) as f64 * 1.3).cos()).collect())
            .collect();
        let d = Dataset::from_rows(rows, true).unwrap();
        let s = build_training_superposition(&d).unwrap();
        // brute force: Σ_j |amp(j, i)|² for each i
        for i in 0..4 {
            let p: f64 = (0..4).map(|j| s.amplitudes()[j * 4 + i].norm_sqr()).sum();
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn postselecting_index_recovers_row() {
        let rows = vec![vec![0.3, -0.2, 0.9], vec![1.0, 1.0, 0.0], vec![0.0, 0.5, 0.5], vec![2.0, 0.1, -1.0]];
        let d = Dataset::from_rows(rows, true).unwrap();
        let s = build_training_superposition(&d).unwrap();
        for i in 0..4 {
            let (post, p) = s.postselect(INDEX, i).unwrap();
            assert!((p - 0.25).abs() < 1e-12);
            for (a, x) in post.amplitudes().iter().zip(d.row(i)) {
                assert!((a.re - x).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn encode_round_trip(v in proptest::collection::vec(-10.0f64..10.0, 8)) {
            prop_assume!(v.iter().any(|x| x.abs() > 1e-3));
            let e = amplitude_encode(&v).unwrap();
            let norm: f64 = e.unit.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-12);
            for (r, x) in e.raw_real().iter().zip(&v) {
                prop_assert!((r - x).abs() < 1e-10);
            }
        }

        #[test]
        fn padding_keeps_genuine_values(rows in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 5), 2..6)) {
            let d = Dataset::from_rows(rows.clone(), false).unwrap();
            prop_assert_eq!(d.padded_features(), 8);
            for (i, row) in rows.iter().enumerate() {
                prop_assert_eq!(d.genuine_row(i), &row[..]);
                prop_assert!(d.row(i)[5..].iter().all(|&x| x == 0.0));
            }
        }
    }
}
