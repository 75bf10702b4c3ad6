use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

mod commands;
mod config;
mod inputs;
mod output;

use config::RunConfig;
use output::Format;

/// Mean-field potentials, vibrational bound states and spectroscopic fits
/// for ultra-long-range Rb(5S)-Rb(nS) dimers.
#[derive(Parser)]
#[command(name = "rydmol", version, about)]
struct Cli {
    /// Flat key = value configuration file; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for primary outputs and run metadata.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Primary output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Restrict the run to a single principal quantum number.
    #[arg(long, global = true)]
    n: Option<u32>,

    /// Override the zero-energy scattering length in bohr.
    #[arg(long = "a-atom", global = true, allow_hyphen_values = true)]
    a_atom: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Radial wavefunction tables (r, u, |Psi|^2) per n.
    Wavefunction,
    /// Mean-field potential tables (R, V in MHz) per n.
    Potential,
    /// Outer-well vibrational level report per n.
    Boundstates,
    /// Binding energies E(v=0), E(v=1) vs n at the configured scattering length.
    ModelCurve,
    /// Chi^2 fit of the scattering length to binding-energy data
    /// (direct CSV or spectra manifests).
    FitScatteringLength {
        /// Input files: `n,v,e_b_mhz,sigma_mhz` data or spectra manifests.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Quadratic Stark fit of a (field, line center) series.
    FitStark { input: PathBuf },
    /// Exponential lifetime fit of a (delay, counts) decay curve.
    FitLifetime { input: PathBuf },
    /// Line fits and Zeeman-corrected binding energy for one spectrum.
    AnalyzeSpectrum { input: PathBuf },
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(n) = cli.n {
        cfg.n_list = vec![n];
        cfg.validate()?;
    }
    if let Some(a) = cli.a_atom {
        cfg.a_atom_bohr = a;
        cfg.validate()?;
    }
    match &cli.command {
        Command::Wavefunction => commands::cmd_wavefunction(&cfg, &cli.out, cli.format),
        Command::Potential => commands::cmd_potential(&cfg, &cli.out, cli.format),
        Command::Boundstates => commands::cmd_boundstates(&cfg, &cli.out, cli.format),
        Command::ModelCurve => commands::cmd_model_curve(&cfg, &cli.out, cli.format),
        Command::FitScatteringLength { inputs } => {
            commands::cmd_fit_scattering_length(&cfg, &cli.out, cli.format, inputs)
        }
        Command::FitStark { input } => commands::cmd_fit_stark(&cfg, &cli.out, cli.format, input),
        Command::FitLifetime { input } => {
            commands::cmd_fit_lifetime(&cfg, &cli.out, cli.format, input)
        }
        Command::AnalyzeSpectrum { input } => {
            commands::cmd_analyze_spectrum(&cfg, &cli.out, cli.format, input)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
