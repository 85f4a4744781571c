use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use latgauge_cli::commands::{self, CommandOutcome};
use latgauge_cli::config::{RawConfig, RunConfig};

#[derive(Parser)]
#[command(
    name = "latgauge",
    version,
    about = "Lattice gauge numerics: partition estimates, eigenphase quadrature, \
             and free-energy stability certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cross-check Haar Monte Carlo against eigenphase quadrature
    WeylCheck(CommonArgs),
    /// Compare two-dimensional Monte Carlo with the exact product formula
    D2Exact(CommonArgs),
    /// Certify free-energy stability bounds over a parameter grid
    StabilitySweep(CommonArgs),
    /// Tabulate truncated Gaussian spectral integrals against their limits
    GueTable(CommonArgs),
    /// Verify gauge invariance of the action and partition estimates
    GaugeInvariance(CommonArgs),
    /// Tabulate the single-plaquette partition function z(c)
    ZTable(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat `key = value` config file; flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Group family: u or su
    #[arg(long)]
    group: Option<String>,
    /// Matrix orders N (comma separated)
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Lattice dimensions d (comma separated)
    #[arg(long, value_delimiter = ',')]
    dim: Option<Vec<usize>>,
    /// Sites per side L (comma separated)
    #[arg(long, value_delimiter = ',')]
    sites: Option<Vec<usize>>,
    /// Lattice spacings a (comma separated)
    #[arg(long, value_delimiter = ',')]
    spacing: Option<Vec<f64>>,
    /// Gauge couplings g^2 (comma separated)
    #[arg(long, value_delimiter = ',')]
    gsq: Option<Vec<f64>>,
    /// Reference coupling g0^2 >= g^2
    #[arg(long)]
    g0sq: Option<f64>,
    /// Monte Carlo samples per estimate
    #[arg(long)]
    samples: Option<u64>,
    /// Master seed; every derived stream is a pure function of it
    #[arg(long)]
    seed: Option<u64>,
    /// Quadrature points per eigenphase dimension (0 = per-group default)
    #[arg(long)]
    grid: Option<usize>,
    /// Action prefactors c for plaquette tables (comma separated)
    #[arg(long, value_delimiter = ',')]
    couplings: Option<Vec<f64>>,
    /// Truncation radii u for spectral integral tables (comma separated)
    #[arg(long, value_delimiter = ',')]
    us: Option<Vec<f64>>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress '#' metadata lines
    #[arg(long)]
    no_meta: bool,
}

impl CommonArgs {
    fn into_raw(self) -> (Option<PathBuf>, RawConfig) {
        let raw = RawConfig {
            group: self.group,
            ns: self.n,
            dims: self.dim,
            sites: self.sites,
            spacings: self.spacing,
            gsqs: self.gsq,
            g0sq: self.g0sq,
            samples: self.samples,
            seed: self.seed,
            grid: self.grid,
            couplings: self.couplings,
            us: self.us,
            out: self.out,
            no_meta: if self.no_meta { Some(true) } else { None },
        };
        (self.config, raw)
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (runner, args): (fn(&RunConfig) -> Result<CommandOutcome>, CommonArgs) = match cli.command
    {
        Command::WeylCheck(a) => (commands::weyl_check::run, a),
        Command::D2Exact(a) => (commands::d2_exact::run, a),
        Command::StabilitySweep(a) => (commands::stability_sweep::run, a),
        Command::GueTable(a) => (commands::gue_table::run, a),
        Command::GaugeInvariance(a) => (commands::gauge_invariance::run, a),
        Command::ZTable(a) => (commands::z_table::run, a),
    };
    let (config_path, flags) = args.into_raw();
    let file_values = match &config_path {
        Some(path) => RawConfig::from_file(path)?,
        None => RawConfig::default(),
    };
    let cfg = RunConfig::resolve(file_values.overlay(flags))?;
    let outcome = runner(&cfg)?;
    let text = outcome.report.emit(!cfg.no_meta);
    match &cfg.out {
        Some(path) => std::fs::write(path, &text)
            .with_context(|| format!("cannot write report to {}", path.display()))?,
        None => print!("{text}"),
    }
    if outcome.checks_passed {
        eprintln!("all checks passed");
    } else {
        eprintln!("CHECK FAILURES: see the status columns in the report");
    }
    Ok(outcome.checks_passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
