//! qmlab: bound states, momentum decompositions, pointwise energy fields,
//! Born amplitudes, and split-step propagation from one binary.
//!
//! Configuration comes from an optional key=value file plus flags, flags
//! winning. Every command writes its data files atomically into --out-dir
//! and a run_meta.json describing exactly what ran.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use config::Settings;

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or configuration; exit code 2.
    Usage(String),
    /// The computation or emission failed; exit code 1.
    Run(String),
}

pub struct Ctx {
    pub out_dir: PathBuf,
    pub lab: bool,
}

#[derive(Parser)]
#[command(
    name = "qmlab",
    version,
    about = "Radial Schrödinger workbench in hartree atomic units"
)]
struct Cli {
    /// key=value config file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for emitted files (default ".")
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Unit system for emitted tables: au | lab (default au)
    #[arg(long, global = true)]
    units: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
pub struct SolveArgs {
    /// Potential kind: coulomb | yukawa | harmonic | tabulated (default coulomb)
    #[arg(long)]
    potential: Option<String>,
    /// Coulomb/yukawa prefactor (default 1)
    #[arg(long, allow_negative_numbers = true)]
    strength: Option<f64>,
    /// Yukawa screening (default 1)
    #[arg(long, allow_negative_numbers = true)]
    screening: Option<f64>,
    /// Harmonic frequency (default 1)
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Table file for the tabulated kind: "r value" lines
    #[arg(long)]
    table: Option<PathBuf>,
    /// Angular momentum quantum number (default 0)
    #[arg(long)]
    l: Option<u32>,
    /// Number of bound states to solve (default 1)
    #[arg(long)]
    count: Option<usize>,
    /// Radial extent in bohr (default 40)
    #[arg(long, allow_negative_numbers = true)]
    r_max: Option<f64>,
    /// Radial node count (default 4000)
    #[arg(long)]
    n: Option<usize>,
}

#[derive(clap::Args)]
pub struct DecomposeArgs {
    /// Potential kind: coulomb | yukawa | harmonic | tabulated (default coulomb)
    #[arg(long)]
    potential: Option<String>,
    /// Coulomb/yukawa prefactor (default 1)
    #[arg(long, allow_negative_numbers = true)]
    strength: Option<f64>,
    /// Yukawa screening (default 1)
    #[arg(long, allow_negative_numbers = true)]
    screening: Option<f64>,
    /// Harmonic frequency (default 1)
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Table file for the tabulated kind
    #[arg(long)]
    table: Option<PathBuf>,
    /// Radial extent in bohr (default 40)
    #[arg(long, allow_negative_numbers = true)]
    r_max: Option<f64>,
    /// Radial node count (default 4000)
    #[arg(long)]
    n: Option<usize>,
    /// Top of the momentum window (default 20)
    #[arg(long, allow_negative_numbers = true)]
    p_max: Option<f64>,
    /// Momentum bin count (default 2000)
    #[arg(long)]
    p_bins: Option<usize>,
}

#[derive(clap::Args)]
pub struct EnergeticsArgs {
    /// Potential kind: coulomb | yukawa | harmonic | tabulated (default coulomb)
    #[arg(long)]
    potential: Option<String>,
    /// Coulomb/yukawa prefactor (default 1)
    #[arg(long, allow_negative_numbers = true)]
    strength: Option<f64>,
    /// Yukawa screening (default 1)
    #[arg(long, allow_negative_numbers = true)]
    screening: Option<f64>,
    /// Harmonic frequency (default 1)
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Table file for the tabulated kind
    #[arg(long)]
    table: Option<PathBuf>,
    /// Radial extent in bohr (default 40)
    #[arg(long, allow_negative_numbers = true)]
    r_max: Option<f64>,
    /// Radial node count (default 4000)
    #[arg(long)]
    n: Option<usize>,
}

#[derive(clap::Args)]
pub struct ScatterArgs {
    /// Yukawa prefactor (default 1)
    #[arg(long, allow_negative_numbers = true)]
    strength: Option<f64>,
    /// Yukawa screening (default 1)
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Incident momentum in a.u. (default 1)
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    /// Single angle in degrees; omitted, sweeps 5..180 in steps of 5
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
}

#[derive(clap::Args)]
pub struct PropagateArgs {
    /// Potential kind: free | softcore-barrier | harmonic | tabulated
    /// (default softcore-barrier)
    #[arg(long)]
    potential: Option<String>,
    /// Harmonic frequency (default 1)
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Table file for the tabulated kind
    #[arg(long)]
    table: Option<PathBuf>,
    /// Left grid edge (default -80)
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    /// Right grid edge (default 79.9609375)
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,
    /// Grid node count (default 4096)
    #[arg(long)]
    nodes: Option<usize>,
    /// Packet center (default -35)
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    /// Packet width (default 3)
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    /// Packet momentum (default 2)
    #[arg(long, allow_negative_numbers = true)]
    p0: Option<f64>,
    /// Time step (default 0.005)
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Step count (default 7000)
    #[arg(long)]
    steps: Option<usize>,
    /// Snapshot stride in steps (default 200)
    #[arg(long)]
    stride: Option<usize>,
    /// Absorbing mask over the outer tenth of each side (default true)
    #[arg(long)]
    mask: Option<bool>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve radial bound states; writes solve.json
    Solve(SolveArgs),
    /// Momentum decomposition of the ground state; writes momentum.csv
    Decompose(DecomposeArgs),
    /// Pointwise energy fields of the ground state; writes energetics.csv
    /// and energetics.json
    Energetics(EnergeticsArgs),
    /// First Born amplitudes for a screened potential; writes scattering.csv
    Scatter(ScatterArgs),
    /// Split-step time evolution; writes ledger.csv and snapshots.csv
    Propagate(PropagateArgs),
    /// Run the full acceptance suite; writes verdict.json
    Verify,
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let mut settings = Settings::load(cli.config.as_deref())?;
    let out_dir = settings.take(
        "out_dir",
        cli.out_dir.map(|p| p.display().to_string()),
        ".".to_string(),
    )?;
    let units = settings.take("units", cli.units, "au".to_string())?;
    let lab = match units.as_str() {
        "au" => false,
        "lab" => true,
        other => return Err(CliError::Usage(format!("unknown unit system '{other}' (au, lab)"))),
    };
    let ctx = Ctx { out_dir: PathBuf::from(out_dir), lab };

    match cli.command {
        Command::Solve(args) => commands::solve(args, settings, &ctx),
        Command::Decompose(args) => commands::decompose(args, settings, &ctx),
        Command::Energetics(args) => commands::energetics_cmd(args, settings, &ctx),
        Command::Scatter(args) => commands::scatter(args, settings, &ctx),
        Command::Propagate(args) => commands::propagate(args, settings, &ctx),
        Command::Verify => commands::verify_cmd(settings, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
