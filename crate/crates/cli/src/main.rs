//! `oscdeform`: verification suites, parameter scans and reports for the
//! deformed-oscillator library.
//!
//! Exit status: 0 success, 1 invariant failure, 2 usage or configuration
//! error.

mod config;
mod scan;
mod verify;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use oscdeform_core::discrepancy::discrepancy_report;
use oscdeform_core::moments::LambdaGrid;
use oscdeform_core::{fockspace, gauss_hermite, Error, PresetKind, QuadratureRule};
use serde::Serialize;

use config::{default_grid, ConfigError, Format, ScanConfig};

#[derive(Parser)]
#[command(
    name = "oscdeform",
    version,
    about = "Deformed ladder operators: checks, scans and reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the constraint, spectrum, normalization, Heisenberg, commutator and Gram suites.
    Verify(Flags),
    /// Tabulate moments and squeezing of a preset over n and a lambda grid.
    Scan(Flags),
    /// Lowest eigenvalues of the truncated Hamiltonian matrix.
    Spectrum(Flags),
    /// Closed forms compared against the numerical oracles.
    Discrepancies(Flags),
}

#[derive(clap::Args, Debug)]
struct Flags {
    /// JSON config (`schema: 1`); flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// harmonic, lambda_shift, case_i, case_ii or case_iii.
    #[arg(long)]
    preset: Option<PresetKind>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Six comma-separated deformation parameters c1..c6.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    c: Option<Vec<f64>>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    lambda_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda_max: Option<f64>,
    #[arg(long)]
    lambda_steps: Option<usize>,
    /// Gauss-Hermite order [default: 128, minimum 16].
    #[arg(long)]
    quad_order: Option<usize>,
    /// Fock-space truncation dimension [default: 80].
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Flags {
    fn into_config(self) -> Result<ScanConfig, ConfigError> {
        let mut config = match &self.config {
            Some(path) => ScanConfig::load(path)?,
            None => ScanConfig::default(),
        };
        if let Some(p) = self.preset {
            config.preset = Some(p);
        }
        if let Some(l) = self.lambda {
            config.lambda = Some(l);
        }
        if let Some(c) = self.c {
            let c: [f64; 6] = c.try_into().map_err(|c: Vec<f64>| {
                ConfigError(format!("--c needs 6 values, got {}", c.len()))
            })?;
            config.c = Some(c);
        }
        if self.lambda_min.is_some() || self.lambda_max.is_some() || self.lambda_steps.is_some() {
            let base: LambdaGrid = config
                .lambda_grid
                .unwrap_or_else(|| default_grid(config.preset.unwrap_or(PresetKind::Harmonic)));
            config.lambda_grid = Some(LambdaGrid {
                min: self.lambda_min.unwrap_or(base.min),
                max: self.lambda_max.unwrap_or(base.max),
                steps: self.lambda_steps.unwrap_or(base.steps),
            });
        }
        config.n_max = self.n_max.unwrap_or(config.n_max);
        config.quad_order = self.quad_order.unwrap_or(config.quad_order);
        config.dim = self.dim.unwrap_or(config.dim);
        config.format = self.format.unwrap_or(config.format);
        if self.out.is_some() {
            config.out = self.out;
        }
        config.validate_common()?;
        Ok(config)
    }
}

enum Failure {
    Invariant(String),
    Config(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(f) => run(f, cmd_verify),
        Command::Scan(f) => run(f, cmd_scan),
        Command::Spectrum(f) => run(f, cmd_spectrum),
        Command::Discrepancies(f) => run(f, cmd_discrepancies),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(
    flags: Flags,
    cmd: fn(&ScanConfig, &QuadratureRule) -> Result<(), Failure>,
) -> Result<(), Failure> {
    let config = flags.into_config()?;
    let rule = gauss_hermite(config.quad_order).map_err(|e| Failure::Config(e.to_string()))?;
    cmd(&config, &rule)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let written = match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.to_string()),
            _ => Ok(()),
        },
    };
    written.map_err(Failure::Config)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_verify(config: &ScanConfig, rule: &QuadratureRule) -> Result<(), Failure> {
    let source = config.source()?;
    let input = verify::VerifyInput {
        label: source.label(),
        params: source.params(),
        preset: source.preset(),
        n_max: config.n_max,
        dim: config.dim,
        rule,
    };
    let report = verify::run(&input);
    let json = to_json(&report);
    match config.format {
        Format::Json => emit(None, &json)?,
        Format::Csv => emit(None, &format!("{report}\n"))?,
    }
    if let Some(path) = &config.out {
        emit(Some(path), &json)?;
    }
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .suites
            .iter()
            .filter(|s| !s.passed)
            .map(|s| s.name)
            .collect();
        Err(Failure::Invariant(format!(
            "failed suites: {}",
            failed.join(", ")
        )))
    }
}

fn cmd_scan(config: &ScanConfig, rule: &QuadratureRule) -> Result<(), Failure> {
    let (kind, grid) = config.scan_target()?;
    let text = match config.format {
        Format::Csv => {
            scan::to_csv(&scan::rows(kind, &grid, config.n_max, rule).map_err(core_failure)?)
        }
        Format::Json => {
            to_json(&scan::table(kind, &grid, config.n_max, rule).map_err(core_failure)?)
        }
    };
    emit(config.out.as_deref(), &text)
}

#[derive(Serialize)]
struct SpectrumRow {
    n: usize,
    eigenvalue: f64,
    expected: f64,
    deviation: f64,
}

fn cmd_spectrum(config: &ScanConfig, _rule: &QuadratureRule) -> Result<(), Failure> {
    let source = config.source()?;
    let ops = fockspace::build(&source.params(), config.dim).map_err(core_failure)?;
    let values = ops.spectrum_check(config.n_max + 1).map_err(core_failure)?;
    let rows: Vec<SpectrumRow> = values
        .iter()
        .enumerate()
        .map(|(n, &eigenvalue)| {
            let expected = n as f64 + 0.5;
            SpectrumRow {
                n,
                eigenvalue,
                expected,
                deviation: eigenvalue - expected,
            }
        })
        .collect();
    let text = match config.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = format!(
                "# {} truncated to dim {}\nn,eigenvalue,expected,deviation\n",
                source.label(),
                config.dim
            );
            for r in &rows {
                s.push_str(&format!(
                    "{},{:.16e},{:.1},{:.3e}\n",
                    r.n, r.eigenvalue, r.expected, r.deviation
                ));
            }
            s
        }
    };
    emit(config.out.as_deref(), &text)
}

fn cmd_discrepancies(config: &ScanConfig, rule: &QuadratureRule) -> Result<(), Failure> {
    let report = discrepancy_report(rule).map_err(core_failure)?;
    let text = match config.format {
        Format::Json => to_json(&report),
        Format::Csv => format!("{report}\n"),
    };
    emit(config.out.as_deref(), &text)
}

/// Bad sizes are the caller's fault; anything else is a failed invariant.
fn core_failure(e: Error) -> Failure {
    match e {
        Error::TooManyLevels { .. }
        | Error::DimensionTooSmall { .. }
        | Error::InvalidGrid(_)
        | Error::LambdaOutOfRange { .. }
        | Error::NotAdmissible { .. } => Failure::Config(e.to_string()),
        _ => Failure::Invariant(e.to_string()),
    }
}
