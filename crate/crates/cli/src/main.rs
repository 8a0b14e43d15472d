//! `ince`: eigenvalue tables, harmonic spectra, wavefunction traces, physics
//! reports and verification summaries as plot-ready JSON or CSV.

mod commands;
mod output;

use std::f64::consts::TAU;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ince_core::{Branch, Parity, Tier};

use output::{Format, Manifest};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

/// Error with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    error: anyhow::Error,
}

impl CliError {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self { code: EXIT_USAGE, error: error.into() }
    }

    pub fn io(error: anyhow::Error) -> Self {
        Self { code: EXIT_IO, error }
    }

    pub fn verify(error: anyhow::Error) -> Self {
        Self { code: EXIT_VERIFY, error }
    }
}

impl From<ince_core::Error> for CliError {
    fn from(e: ince_core::Error) -> Self {
        use ince_core::Error as E;
        match e {
            E::NumericalFailure { .. } | E::OracleFailure { .. } | E::InternalInvariant(_) => {
                Self::verify(e.into())
            }
            _ => Self::usage(e),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ince", version, about = "Polynomial solutions of the Dirac equation in a plane wave inside an underdense medium")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output format (default: csv for wavefunction and scan, json otherwise).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Write data to PATH and a run manifest to PATH.manifest.json.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, value_enum, global = true, default_value_t = TierArg::Extended)]
    tier: TierArg,

    /// Significant digits of CSV numbers (JSON always uses 17).
    #[arg(long, global = true, default_value_t = 17, value_parser = clap::value_parser!(u8).range(1..=17))]
    precision: u8,

    /// No randomness is used anywhere; accepted for scripting symmetry. Takes no value.
    #[arg(long, global = true)]
    seedless: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TierArg {
    Double,
    Extended,
}

impl From<TierArg> for Tier {
    fn from(t: TierArg) -> Self {
        match t {
            TierArg::Double => Tier::Double,
            TierArg::Extended => Tier::Extended,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues and coefficient vectors of one matrix.
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Trace of one polynomial (optionally times the prefactor) over xi.
    #[command(allow_negative_numbers = true)]
    Wavefunction(WavefunctionArgs),
    /// Dimensionless parameters from laser/plasma inputs.
    #[command(allow_negative_numbers = true)]
    Physics(PhysicsArgs),
    /// Momentum classification over a grid of n and a.
    #[command(allow_negative_numbers = true)]
    Scan(ScanArgs),
    /// Full invariant suite for one configuration; exit 1 on any failure.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub parity: ParityArg,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub a: f64,
}

#[derive(Args, Debug)]
pub struct WavefunctionArgs {
    #[arg(long, value_enum)]
    pub parity: ParityArg,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub a: f64,
    /// Select the eigenvalue nearest this value.
    #[arg(long)]
    pub eta: f64,
    /// Largest accepted |eta - selected eigenvalue|.
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
    #[arg(long, default_value_t = -TAU)]
    pub xi_min: f64,
    #[arg(long, default_value_t = TAU)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 1024)]
    pub points: usize,
    /// Multiply by exp(-(a/4) cos xi).
    #[arg(long)]
    pub with_prefactor: bool,
    #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
    pub branch: BranchArg,
}

#[derive(Args, Debug)]
pub struct PhysicsArgs {
    /// Photon energy, eV.
    #[arg(long)]
    pub photon_ev: f64,
    /// Plasmon energy, eV (or give --density-cm3).
    #[arg(long)]
    pub plasma_ev: Option<f64>,
    /// Electron density, cm^-3 (or give --plasma-ev).
    #[arg(long)]
    pub density_cm3: Option<f64>,
    /// Intensity, W/cm^2.
    #[arg(long)]
    pub intensity: f64,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub parity: ParityArg,
    /// Comma-separated values or inclusive ranges, e.g. `1,3,5..8`.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub n: Vec<String>,
    /// Comma-separated coupling values.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub a: Vec<f64>,
    /// P_z = 2 p_z / k_p.
    #[arg(long, default_value_t = 0.0)]
    pub pz: f64,
    /// K = 2 kappa / k_p.
    #[arg(long, default_value_t = 0.0)]
    pub kappa: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub parity: ParityArg,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub a: f64,
    /// Test hook: shift the eigenvalue fed to the ODE-residual check.
    #[arg(long, hide = true)]
    pub corrupt_eigenvalue: Option<f64>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let started = Instant::now();
    let tier: Tier = cli.common.tier.into();
    let digits = cli.common.precision as usize;
    let (name, default_format, outcome) = match &cli.command {
        Command::Spectrum(a) => ("spectrum", Format::Json, commands::spectrum(a, tier, digits)?),
        Command::Wavefunction(a) => ("wavefunction", Format::Csv, commands::wavefunction(a, tier, digits)?),
        Command::Physics(a) => ("physics", Format::Json, commands::physics(a, digits)?),
        Command::Scan(a) => ("scan", Format::Csv, commands::scan(a, tier, digits)?),
        Command::Verify(a) => ("verify", Format::Json, commands::verify(a, tier, digits)?),
    };
    let format = cli.common.format.unwrap_or(default_format);
    let data = output::render(&outcome.report, format).map_err(CliError::io)?;
    output::emit(&data, cli.common.out.as_deref(), |outputs| Manifest {
        command: name,
        parameters: outcome.parameters.clone(),
        tier: tier.as_str(),
        format,
        outputs,
        wall_time_s: started.elapsed().as_secs_f64(),
    })?;
    match outcome.failure {
        Some(msg) => Err(CliError::verify(anyhow::anyhow!(msg))),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            ExitCode::from(e.code)
        }
    }
}
