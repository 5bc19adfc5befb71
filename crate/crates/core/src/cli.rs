//! Experiment harness behind the `qad` binary: load a dataset, run a
//! classical detector and its quantum counterpart on one test point, and
//! report how they compare.

use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical::{
    centered_test_state, classify_density, classify_gaussian, fit_density, fit_gaussian_with,
    label_if_above, proximity_classical, CovarianceDivisor, Label,
};
use crate::density::{detect_density, LogSigmaBounds};
use crate::encode::{load_dataset, read_rows, Dataset, LoadOptions, NormedVector};
use crate::error::Error;
use crate::gauss::{build_unit_covariance, detect_gaussian, precision_for, proximity_quantum};
use crate::sim::{EstimatorMode, PhaseEstimationConfig};

pub const SCHEMA: &str = "qad-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Density,
    Gauss,
    Proximity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestInput {
    /// A training row, by zero-based index.
    Row(usize),
    /// First row of a separate CSV file.
    File(PathBuf),
}

impl TestInput {
    /// Integers name a row; anything else is a path.
    pub fn parse(s: &str) -> Self {
        s.parse().map(TestInput::Row).unwrap_or_else(|_| TestInput::File(PathBuf::from(s)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bits {
    Fixed(u32),
    /// Enough bits for this target error at the configured `κ`.
    Auto(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub method: Method,
    pub data: PathBuf,
    pub test: TestInput,
    pub epsilon: f64,
    pub kappa: Option<f64>,
    pub bits: Option<Bits>,
    pub mode: ModeKind,
    pub shots: Option<u64>,
    pub seed: u64,
    pub header: bool,
    pub normalize: bool,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(method: Method, data: impl Into<PathBuf>, test: TestInput, epsilon: f64) -> Self {
        Self {
            method,
            data: data.into(),
            test,
            epsilon,
            kappa: None,
            bits: None,
            mode: ModeKind::Exact,
            shots: None,
            seed: 0,
            header: false,
            normalize: true,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        match (self.mode, self.shots) {
            (ModeKind::Sampled, None) => return Err(Error::InvalidConfig("sampled mode needs --shots".into())),
            (ModeKind::Exact, Some(_)) => {
                return Err(Error::InvalidConfig("--shots only applies to sampled mode".into()))
            }
            _ => {}
        }
        if self.method != Method::Density && (self.kappa.is_none() || self.bits.is_none()) {
            return Err(Error::InvalidConfig(format!(
                "method {} needs --kappa and --bits or --auto-bits",
                self.method
            )));
        }
        Ok(())
    }

    pub fn estimator_mode(&self) -> Result<EstimatorMode, Error> {
        match (self.mode, self.shots) {
            (ModeKind::Sampled, Some(shots)) => EstimatorMode::sampled(shots, self.seed),
            _ => Ok(EstimatorMode::Exact),
        }
    }

    pub fn phase_config(&self) -> Result<PhaseEstimationConfig, Error> {
        let kappa = self.kappa.ok_or_else(|| Error::InvalidConfig("missing kappa".into()))?;
        let bits = match self.bits.ok_or_else(|| Error::InvalidConfig("missing bits".into()))? {
            Bits::Fixed(b) => b,
            Bits::Auto(target) => precision_for(target, kappa)?,
        };
        PhaseEstimationConfig::new(bits, kappa)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Density => "density",
            Method::Gauss => "gauss",
            Method::Proximity => "proximity",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Load,
    Classical,
    Quantum,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Load => "load",
            Stage::Classical => "classical",
            Stage::Quantum => "quantum",
            Stage::Output => "output",
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{stage} stage: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Error,
    },
    #[error("{stage} stage: {}: {source}", path.display())]
    Io {
        stage: Stage,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn stage(&self) -> Stage {
        match self {
            CliError::Stage { stage, .. } | CliError::Io { stage, .. } => *stage,
        }
    }
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, CliError>;
}

impl<T> AtStage<T> for Result<T, Error> {
    fn at(self, stage: Stage) -> Result<T, CliError> {
        self.map_err(|source| CliError::Stage { stage, source })
    }
}

fn open(path: &Path, stage: Stage) -> Result<File, CliError> {
    File::open(path).map_err(|source| CliError::Io { stage, path: path.to_path_buf(), source })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema: String,
    pub method: Method,
    pub classical_score: f64,
    pub quantum_score: f64,
    pub abs_difference: f64,
    pub classical_label: Label,
    pub quantum_label: Label,
    pub agreement: bool,
    pub success_probabilities: Vec<f64>,
    pub discarded_weight: f64,
    /// Phase-estimation bits actually used, after resolving `auto`.
    pub bits: Option<u32>,
    pub config: RunConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl ComparisonReport {
    pub fn exit_code(&self) -> i32 {
        if self.agreement {
            0
        } else {
            2
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// JSON with the timing block removed, for reproducibility checks.
    pub fn to_reproducible_json(&self) -> String {
        Self { timing: None, ..self.clone() }.to_json()
    }
}

fn load_test_point(config: &RunConfig, data: &Dataset) -> Result<Vec<f64>, CliError> {
    match &config.test {
        TestInput::Row(i) => {
            if *i >= data.samples() {
                return Err(CliError::Stage {
                    stage: Stage::Load,
                    source: Error::InvalidConfig(format!(
                        "test row {i} out of range for {} samples",
                        data.samples()
                    )),
                });
            }
            Ok(data.genuine_row(*i).to_vec())
        }
        TestInput::File(path) => {
            let rows = read_rows(open(path, Stage::Load)?, config.header).at(Stage::Load)?;
            rows.into_iter().next().ok_or_else(|| CliError::Stage {
                stage: Stage::Load,
                source: Error::Parse(format!("{}: no test row", path.display())),
            })
        }
    }
}

struct Scored {
    score: f64,
    label: Label,
}

struct QuantumScored {
    score: f64,
    label: Label,
    success_probabilities: Vec<f64>,
    discarded_weight: f64,
}

/// Runs both detectors and compares them.
pub fn run(config: &RunConfig) -> Result<ComparisonReport, CliError> {
    let start = Instant::now();
    config.validate().at(Stage::Config)?;
    let mode = config.estimator_mode().at(Stage::Config)?;
    let phase = match config.method {
        Method::Density => None,
        _ => Some(config.phase_config().at(Stage::Config)?),
    };

    let options = LoadOptions { normalize_rows: config.normalize, header: config.header };
    let data = load_dataset(open(&config.data, Stage::Load)?, &options).at(Stage::Load)?;
    let x = load_test_point(config, &data)?;
    let padded = data.test_vector(&x).at(Stage::Load)?;
    let genuine = &padded[..data.features()];

    let (classical, quantum) = match config.method {
        Method::Density => {
            let model = fit_density(&data).at(Stage::Classical)?;
            let (label, score) = classify_density(&model, genuine, config.epsilon).at(Stage::Classical)?;
            let x0 = NormedVector::from_real(&padded).at(Stage::Quantum)?;
            let q = detect_density(&data, &x0, config.epsilon, &mode, LogSigmaBounds::Auto).at(Stage::Quantum)?;
            (
                Scored { score, label },
                QuantumScored {
                    score: q.log_p,
                    label: q.label,
                    success_probabilities: q.prep.iter().map(|p| p.success_probability).collect(),
                    discarded_weight: 0.0,
                },
            )
        }
        Method::Gauss => {
            let phase = phase.expect("validated");
            let model = fit_gaussian_with(&data, CovarianceDivisor::Sample).at(Stage::Classical)?;
            let (label, score, _) = classify_gaussian(&model, genuine, config.epsilon).at(Stage::Classical)?;
            let x0 = NormedVector::from_real(&padded).at(Stage::Quantum)?;
            let q = detect_gaussian(&data, &x0, config.epsilon, &phase, &mode).at(Stage::Quantum)?;
            (
                Scored { score, label },
                QuantumScored {
                    score: q.p_test,
                    label: q.label,
                    success_probabilities: Vec::new(),
                    discarded_weight: q.discarded_weight,
                },
            )
        }
        Method::Proximity => {
            let phase = phase.expect("validated");
            let z0 = centered_test_state(&data, genuine).at(Stage::Classical)?;
            let score = proximity_classical(&data, &z0).at(Stage::Classical)?;
            let cov = build_unit_covariance(&data).at(Stage::Quantum)?;
            let state = NormedVector::from_real(&z0).at(Stage::Quantum)?;
            let f = proximity_quantum(&cov, &state, &phase, &mode).at(Stage::Quantum)?;
            (
                Scored { score, label: label_if_above(score, config.epsilon) },
                QuantumScored {
                    score: f,
                    label: label_if_above(f, config.epsilon),
                    success_probabilities: Vec::new(),
                    discarded_weight: 0.0,
                },
            )
        }
    };

    Ok(ComparisonReport {
        schema: SCHEMA.to_string(),
        method: config.method,
        classical_score: classical.score,
        quantum_score: quantum.score,
        abs_difference: (classical.score - quantum.score).abs(),
        classical_label: classical.label,
        quantum_label: quantum.label,
        agreement: classical.label == quantum.label,
        success_probabilities: quantum.success_probabilities,
        discarded_weight: quantum.discarded_weight,
        bits: phase.map(|p| p.bits),
        config: config.clone(),
        timing: Some(Timing { wall_seconds: start.elapsed().as_secs_f64() }),
    })
}

/// Writes the report to `config.out` when set.
pub fn write_report(report: &ComparisonReport) -> Result<(), CliError> {
    if let Some(path) = &report.config.out {
        std::fs::write(path, report.to_json())
            .map_err(|source| CliError::Io { stage: Stage::Output, path: path.clone(), source })?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    Shots,
    Bits,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: SweepParameter,
    pub value: u64,
    pub seed: u64,
    pub quantum_score: f64,
    pub classical_score: f64,
    pub abs_difference: f64,
    pub wall_seconds: f64,
}

/// One [`run`] per value; value `i` runs with seed `config.seed + i`.
pub fn sweep(config: &RunConfig, parameter: SweepParameter, values: &[u64]) -> Result<Vec<SweepRow>, CliError> {
    let fail = |msg: String| CliError::Stage { stage: Stage::Config, source: Error::InvalidConfig(msg) };
    if values.is_empty() {
        return Err(fail("sweep needs at least one value".into()));
    }
    match parameter {
        SweepParameter::Shots if config.mode != ModeKind::Sampled => {
            return Err(fail("shots sweep needs sampled mode".into()))
        }
        SweepParameter::Bits if config.method == Method::Density => {
            return Err(fail("bits sweep needs the gauss or proximity method".into()))
        }
        _ => {}
    }
    values
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let mut c = config.clone();
            c.seed = config.seed.wrapping_add(i as u64);
            match parameter {
                SweepParameter::Shots => c.shots = Some(value),
                SweepParameter::Bits => {
                    let bits = u32::try_from(value).map_err(|_| fail(format!("bits value {value} too large")))?;
                    c.bits = Some(Bits::Fixed(bits));
                }
            }
            let report = run(&c)?;
            Ok(SweepRow {
                parameter,
                value,
                seed: c.seed,
                quantum_score: report.quantum_score,
                classical_score: report.classical_score,
                abs_difference: report.abs_difference,
                wall_seconds: report.timing.map_or(0.0, |t| t.wall_seconds),
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Stage { stage: Stage::Output, source: Error::Parse(e.to_string()) };
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row).map_err(io)?;
    }
    writer.flush().map_err(|e| io(e.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_csv(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    const RANDOM_4X4: &str = "0.3,0.1,-0.4,0.2\n-0.2,0.5,0.1,0.3\n0.4,-0.3,0.2,-0.1\n0.1,0.2,0.6,-0.5\n";

    #[test]
    fn density_exact_agrees() {
        let dir = tempfile::tempdir().unwrap();
        let data = write_csv(dir.path(), "d.csv", RANDOM_4X4);
        let report = run(&RunConfig::new(Method::Density, data, TestInput::Row(1), 0.05)).unwrap();
        assert!(report.agreement);
        assert!(report.abs_difference <= 1e-9);
        assert_eq!(report.exit_code(), 0);
        assert_eq!(report.schema, SCHEMA);
        assert_eq!(report.success_probabilities.len(), 3);
    }

    #[test]
    fn difference_is_score_subtraction() {
        let dir = tempfile::tempdir().unwrap();
        let data = write_csv(dir.path(), "d.csv", RANDOM_4X4);
        let mut cfg = RunConfig::new(Method::Density, data, TestInput::Row(0), 0.05);
        cfg.mode = ModeKind::Sampled;
        cfg.shots = Some(200);
        cfg.seed = 11;
        let r = run(&cfg).unwrap();
        assert!((r.abs_difference - (r.classical_score - r.quantum_score).abs()).abs() <= 1e-15);
        assert_eq!(r.agreement, r.classical_label == r.quantum_label);
    }

    #[test]
    fn config_consistency() {
        let mut cfg = RunConfig::new(Method::Density, "x.csv", TestInput::Row(0), 0.1);
        cfg.mode = ModeKind::Sampled;
        assert!(cfg.validate().is_err());
        cfg.shots = Some(10);
        assert!(cfg.validate().is_ok());
        cfg.mode = ModeKind::Exact;
        assert!(cfg.validate().is_err());

        let mut cfg = RunConfig::new(Method::Gauss, "x.csv", TestInput::Row(0), 0.1);
        assert!(cfg.validate().is_err());
        cfg.kappa = Some(4.0);
        cfg.bits = Some(Bits::Auto(0.01));
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.phase_config().unwrap().bits, precision_for(0.01, 4.0).unwrap());
    }

    #[test]
    fn test_input_parsing() {
        assert_eq!(TestInput::parse("3"), TestInput::Row(3));
        assert_eq!(TestInput::parse("t.csv"), TestInput::File(PathBuf::from("t.csv")));
    }

    #[test]
    fn malformed_csv_names_load_stage() {
        let dir = tempfile::tempdir().unwrap();
        let data = write_csv(dir.path(), "bad.csv", "0.1,0.2\n0.3,abc\n");
        let err = run(&RunConfig::new(Method::Density, data, TestInput::Row(0), 0.1)).unwrap_err();
        assert_eq!(err.stage(), Stage::Load);
        assert!(err.to_string().contains("abc"), "{err}");
    }

    #[test]
    fn empty_sweep_is_an_error() {
        let cfg = RunConfig::new(Method::Density, "x.csv", TestInput::Row(0), 0.1);
        assert!(sweep(&cfg, SweepParameter::Shots, &[]).is_err());
    }

    #[test]
    fn report_json_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let data = write_csv(dir.path(), "d.csv", RANDOM_4X4);
        let r = run(&RunConfig::new(Method::Density, data, TestInput::Row(2), 0.05)).unwrap();
        let back: ComparisonReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!r.to_reproducible_json().contains("wall_seconds"));
    }
}
