use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod input;

/// Restricted root systems, spherical weights and Satake boundary structure.
#[derive(Debug, Parser)]
#[command(name = "satake", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the positive restricted roots with multiplicities.
    Roots(Common),
    /// Test a highest weight for sphericity.
    Spherical(Common),
    /// Basis of the lattice of spherical weights.
    Lattice(Common),
    /// Boundary components of the compactification and their closure order.
    Boundary(Common),
    /// Build the irreducible representation of sl(n) and its K-fixed vector.
    Embed(Common),
    /// Convergence trace of the Fatou limit, or of a boundary limit with --subset.
    Limits(Common),
    /// Run the consistency checks for one system and weight.
    Verify(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Built-in or directory preset, e.g. sl3r, su21, "so(2,3)", f4(4).
    #[arg(long, conflicts_with = "system")]
    pub preset: Option<String>,
    /// Raw system: LABEL RANK with optional multiplicities, e.g. A2, B2:1,3, BC1:2/1.
    #[arg(long)]
    pub system: Option<String>,
    /// Fundamental-weight coefficients, comma separated; p/q allowed.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    /// Subset E of simple roots, 1-based and comma separated; "" for the empty set.
    #[arg(long)]
    pub subset: Option<String>,
    /// Diagonal of H, comma separated, trace zero.
    #[arg(long, allow_hyphen_values = true)]
    pub direction: Option<String>,
    /// Largest t of the trace grid.
    #[arg(long, default_value_t = 5.0)]
    pub tmax: f64,
    /// Number of grid intervals.
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Random seed, decimal or 0x-prefixed hex.
    #[arg(long, default_value = "0xC0FFEE")]
    pub seed: String,
    /// Tolerance overrides, e.g. nullspace=1e-9,limit=1e-8.
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory of extra preset tables (*.toml).
    #[arg(long, env = "SATAKE_PRESET_DIR")]
    pub preset_dir: Option<PathBuf>,
}

/// Outcome of a subcommand: its rendered output and whether every check held.
pub struct Report {
    pub text: String,
    pub verified: bool,
}

impl Report {
    pub fn ok(text: String) -> Self {
        Self { text, verified: true }
    }
}

fn run(cli: Cli) -> anyhow::Result<(Report, Option<PathBuf>)> {
    let (report, common) = match cli.command {
        Command::Roots(c) => (commands::roots(&c)?, c),
        Command::Spherical(c) => (commands::spherical(&c)?, c),
        Command::Lattice(c) => (commands::lattice(&c)?, c),
        Command::Boundary(c) => (commands::boundary(&c)?, c),
        Command::Embed(c) => (commands::embed(&c)?, c),
        Command::Limits(c) => (commands::limits(&c)?, c),
        Command::Verify(c) => (commands::verify(&c)?, c),
    };
    Ok((report, common.out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok((report, out)) => {
            let written = match out {
                Some(path) => fs::write(&path, &report.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => std::io::stdout().write_all(report.text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if report.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
