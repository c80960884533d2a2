//! `electrolyte`: runs the manufactured-solution study and the physical studies.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use config::{Command, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "electrolyte", version, about = "Equilibrium electrolyte finite-element solver")]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Manufactured-solution convergence study on the unit square.
    Mms(Flags),
    /// Single run on the unit interval, square or cube.
    Run(Flags),
    /// Bulk-modulus sweep.
    Sweep(Flags),
    /// Annulus with the inner circle at -voltage and the outer at +voltage.
    Annulus(Flags),
    /// Temperature sweep; each factor divides psi, lambda and khat.
    Temperature(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Key-value configuration file, applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    /// Cells per side (the mesh size is 1/h of this).
    #[arg(long = "h")]
    cells: Option<usize>,
    /// Electrode potential magnitude.
    #[arg(long, allow_negative_numbers = true)]
    voltage: Option<f64>,
    /// Bulk modulus; a list for `sweep`.
    #[arg(long, value_delimiter = ',')]
    khat: Option<Vec<f64>>,
    /// Temperature factors; a list for `temperature`, one factor elsewhere.
    #[arg(long, value_delimiter = ',')]
    tau: Option<Vec<f64>>,
    #[arg(long)]
    r_in: Option<f64>,
    #[arg(long)]
    r_out: Option<f64>,
    #[arg(long)]
    n_radial: Option<usize>,
    #[arg(long)]
    n_angular: Option<usize>,
    /// Cells per side of each refinement level.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    /// Absolute Newton tolerance on the residual norm.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Initial number of voltage ramp levels.
    #[arg(long)]
    continuation: Option<usize>,
}

/// Failures of the command line tool, each with its own exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Solver(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Solver(m) | Failure::Io(m) => m,
        }
    }
}

impl From<electrolyte_fem::Error> for Failure {
    fn from(e: electrolyte_fem::Error) -> Self {
        use electrolyte_fem::Error as E;
        let msg = e.to_string();
        match e {
            E::Io { .. } => Failure::Io(msg),
            E::InvalidMesh(_) | E::InvalidParameter(_) | E::Parse(_) => Failure::Config(msg),
            _ => Failure::Solver(msg),
        }
    }
}

fn resolve(command: Command, flags: Flags) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::defaults(command);
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", path.display())))?;
        cfg.apply_text(&text)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    }
    if let Some(v) = flags.out {
        cfg.out = v;
    }
    if let Some(v) = flags.dim {
        cfg.dim = v;
    }
    if let Some(v) = flags.cells {
        cfg.cells = Some(v);
    }
    if let Some(v) = flags.voltage {
        cfg.voltage = v;
    }
    if let Some(v) = flags.khat {
        if command == Command::Sweep {
            cfg.khat_values = v;
        } else if let [k] = v[..] {
            cfg.mixture.khat = k;
        } else {
            return Err(Failure::Config("--khat takes a single value outside `sweep`".into()));
        }
    }
    if let Some(v) = flags.tau {
        if command == Command::Temperature {
            cfg.tau_values = v;
        } else if let [t] = v[..] {
            cfg.mixture = cfg.mixture.at_temperature_scale(t).map_err(Failure::from)?;
        } else {
            return Err(Failure::Config("--tau takes a single value outside `temperature`".into()));
        }
    }
    if let Some(v) = flags.r_in {
        cfg.r_in = v;
    }
    if let Some(v) = flags.r_out {
        cfg.r_out = v;
    }
    if let Some(v) = flags.n_radial {
        cfg.n_radial = v;
    }
    if let Some(v) = flags.n_angular {
        cfg.n_angular = v;
    }
    if let Some(v) = flags.levels {
        cfg.levels = v;
    }
    if let Some(v) = flags.tol {
        cfg.newton.abs_tol = v;
    }
    if let Some(v) = flags.max_iter {
        cfg.newton.max_iter = v;
    }
    if let Some(v) = flags.continuation {
        cfg.newton.continuation_steps = v;
    }
    cfg.validate().map_err(Failure::Config)?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();

    let (command, flags) = match cli.command {
        Sub::Mms(f) => (Command::Mms, f),
        Sub::Run(f) => (Command::Run, f),
        Sub::Sweep(f) => (Command::Sweep, f),
        Sub::Annulus(f) => (Command::Annulus, f),
        Sub::Temperature(f) => (Command::Temperature, f),
    };
    let outcome = resolve(command, flags).and_then(|cfg| commands::execute(&cfg));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
