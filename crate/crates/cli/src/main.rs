use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mtree_cli::config::{Config, ScenarioName};
use mtree_cli::{run, Overrides};

#[derive(Parser)]
#[command(name = "mtree", version, about = "Negative spectrum and eigenvalue bounds on regular metric trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario document (TOML, or JSON when the name ends in .json).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed for random instances.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative slack on every asserted inequality.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Eigenvalue table by component, checked against the direct tree oracle.
    Spectrum,
    /// CLR and Lieb-Thirring type bounds on one instance.
    Bound,
    /// Randomized campaign over seeded trees and potentials.
    Verify,
    /// Ground state and counts below the spectral bottom of a homogeneous tree.
    Homogeneous,
    /// Weighted Sobolev inequality on random trial functions.
    Sobolev,
    /// Strong coupling ratio against the classical constant.
    Weyl,
    /// Weak coupling exponent of the lowest eigenvalue.
    WeakCoupling,
}

impl From<Command> for ScenarioName {
    fn from(c: Command) -> Self {
        match c {
            Command::Spectrum => Self::Spectrum,
            Command::Bound => Self::Bound,
            Command::Verify => Self::Verify,
            Command::Homogeneous => Self::Homogeneous,
            Command::Sobolev => Self::Sobolev,
            Command::Weyl => Self::Weyl,
            Command::WeakCoupling => Self::WeakCoupling,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(p) => Config::load(p),
        None => Err(mtree_cli::error::CliError::Config("--config is required".into())),
    };
    let overrides = Overrides {
        seed: cli.seed,
        tol: cli.tol,
        out: cli.out.clone(),
        jobs: cli.jobs,
    };
    match cfg.and_then(|c| run(cli.command.into(), c, &overrides)) {
        Ok(summary) => {
            for a in &summary.assertions {
                println!("{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
            }
            ExitCode::from(summary.exit_code as u8)
        }
        Err(e) => {
            eprintln!("mtree: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
