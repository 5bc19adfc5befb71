use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qad::cli::{run, sweep, write_report, write_sweep_csv, Bits, Method, ModeKind, RunConfig, SweepParameter, TestInput};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Density,
    Gauss,
    Proximity,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SweepArg {
    Shots,
    Bits,
}

/// Compare classical anomaly detectors with their simulated quantum counterparts.
///
/// Exit status: 0 when the labels agree, 2 when they disagree, 1 on error.
#[derive(Debug, Parser)]
#[command(name = "qad", version)]
struct Args {
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Training CSV, one sample per row.
    #[arg(long)]
    data: PathBuf,
    /// Test point: a training row index, or a CSV file whose first row is used.
    #[arg(long)]
    test: String,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    kappa: Option<f64>,
    /// Phase-estimation bits.
    #[arg(long, conflicts_with = "auto_bits")]
    bits: Option<u32>,
    /// Pick bits for this target error instead.
    #[arg(long, value_name = "EPS")]
    auto_bits: Option<f64>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV files start with a header row.
    #[arg(long)]
    header: bool,
    /// Keep training rows as given instead of scaling them to unit length.
    #[arg(long)]
    no_normalize: bool,
    /// Write the JSON report (or sweep CSV) here as well.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sweep a parameter instead of a single run.
    #[arg(long, value_enum, requires = "values")]
    sweep: Option<SweepArg>,
    /// Comma-separated sweep values.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<u64>>,
}

impl Args {
    fn config(&self) -> RunConfig {
        let method = match self.method {
            MethodArg::Density => Method::Density,
            MethodArg::Gauss => Method::Gauss,
            MethodArg::Proximity => Method::Proximity,
        };
        RunConfig {
            method,
            data: self.data.clone(),
            test: TestInput::parse(&self.test),
            epsilon: self.epsilon,
            kappa: self.kappa,
            bits: self.bits.map(Bits::Fixed).or(self.auto_bits.map(Bits::Auto)),
            mode: match self.mode {
                ModeArg::Exact => ModeKind::Exact,
                ModeArg::Sampled => ModeKind::Sampled,
            },
            shots: self.shots,
            seed: self.seed,
            header: self.header,
            normalize: !self.no_normalize,
            out: if self.sweep.is_some() { None } else { self.out.clone() },
        }
    }
}

fn main() -> ExitCode {
    // usage errors exit 1; status 2 is reserved for label disagreement
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = args.config();

    if let Some(param) = args.sweep {
        let param = match param {
            SweepArg::Shots => SweepParameter::Shots,
            SweepArg::Bits => SweepParameter::Bits,
        };
        let values = args.values.clone().unwrap_or_default();
        let result = sweep(&config, param, &values).and_then(|rows| match &args.out {
            Some(path) => {
                let file = std::fs::File::create(path).map_err(|source| qad::cli::CliError::Io {
                    stage: qad::cli::Stage::Output,
                    path: path.clone(),
                    source,
                })?;
                write_sweep_csv(&rows, file)?;
                write_sweep_csv(&rows, std::io::stdout().lock())
            }
            None => write_sweep_csv(&rows, std::io::stdout().lock()),
        });
        return match result {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }

    match run(&config).and_then(|r| write_report(&r).map(|_| r)) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.to_json().as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
