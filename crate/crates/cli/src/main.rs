//! Command-line front end: maximum-entropy representations, membership and
//! classicality verdicts, ratio-functional maxima, grid sweeps, and
//! smoothness probes, all with machine-readable output.
//!
//! Exit codes: 0 success, 2 usage or parse failure, 3 solver
//! non-convergence, 4 unwritable output.

mod commands;
mod config;
mod json;

use clap::{Parser, Subcommand};
use commands::CliError;
use config::{OutputFormat, RunConfig};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "entroq",
    version,
    about = "Qubit state-space computations on the eight-point phase space",
    after_help = "Configuration precedence: flags override the --config file, which overrides \
                  defaults. Config keys: tol_entropy, tol_gap, tol_feas, k_max, seed, format."
)]
struct Cli {
    /// Configuration file of key=value lines.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Omit the timestamp field from JSON documents (byte-identical reruns).
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// Entropy slack for the bound H_2k >= 2.
    #[arg(long, global = true, value_name = "X")]
    tol_entropy: Option<f64>,

    /// Duality-gap target for the iterative solver.
    #[arg(long, global = true, value_name = "X")]
    tol_gap: Option<f64>,

    /// Dual-feasibility slack for certificates.
    #[arg(long, global = true, value_name = "X")]
    tol_feas: Option<f64>,

    /// Output format: json (default) or csv (check only; sweep always
    /// writes CSV).
    #[arg(long, global = true, value_name = "FMT")]
    format: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum-H_2k representation of r with its dual certificate.
    Maxent {
        /// Bloch vector as x,y,z (the token 1/sqrt3 is accepted).
        #[arg(long, value_name = "X,Y,Z")]
        r: String,
        /// Entropy order parameter (the order is 2k).
        #[arg(long)]
        k: u32,
    },
    /// Entropy-bound membership verdict over orders k = 1..kmax.
    Check {
        #[arg(long, value_name = "X,Y,Z")]
        r: String,
        /// Largest order parameter checked (default from config, 5).
        #[arg(long)]
        kmax: Option<u32>,
    },
    /// Whether a nonnegative representation reaches 2-entropy 2.
    Classical {
        #[arg(long, value_name = "X,Y,Z")]
        r: String,
    },
    /// Maximum of the norm-ratio functional at order 2k.
    Fmax {
        #[arg(long)]
        k: u32,
        /// Exhaustive sign-vector enumeration (the default mode).
        #[arg(long, conflicts_with = "multistart")]
        enumerate: bool,
        /// Seeded gradient-ascent restarts instead of enumeration.
        #[arg(long, value_name = "N")]
        multistart: Option<u32>,
        /// Seed for --multistart (default from config, 42).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Membership/classicality sweep over the grid of step SIZE in [-1,1]^3,
    /// written as CSV.
    Sweep {
        /// Largest order parameter for the membership column.
        #[arg(long)]
        k: u32,
        /// Grid step in (0, 1].
        #[arg(long, value_name = "STEP")]
        grid: f64,
        /// Output CSV path (written atomically).
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Finite-difference smoothness probe of H_alpha((q, 1-q)) at q = 0.
    Probe {
        #[arg(long)]
        alpha: f64,
        /// Derivative order to probe.
        #[arg(long)]
        order: u32,
    },
}

fn main() {
    let cli = Cli::parse(); // clap exits 2 on usage errors
    if let Err(err) = run(cli) {
        err.exit();
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        config.apply_file(path).map_err(CliError::Usage)?;
    }
    if let Some(v) = cli.tol_entropy {
        config.tol_entropy = v;
    }
    if let Some(v) = cli.tol_gap {
        config.tol_gap = v;
    }
    if let Some(v) = cli.tol_feas {
        config.tol_feas = v;
    }
    if let Some(fmt) = &cli.format {
        config.format = match fmt.as_str() {
            "json" => OutputFormat::Json,
            "csv" => OutputFormat::Csv,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown format {other:?} (expected json or csv)"
                )))
            }
        };
    }
    config.validate().map_err(CliError::Usage)?;

    let timestamp = if cli.no_timestamp {
        None
    } else {
        Some(chrono::Utc::now().to_rfc3339())
    };

    match cli.command {
        Command::Maxent { r, k } => commands::maxent(&r, k, &config, timestamp),
        Command::Check { r, kmax } => commands::check(&r, kmax, &config, timestamp),
        Command::Classical { r } => commands::classical(&r, &config, timestamp),
        Command::Fmax { k, enumerate, multistart, seed } => {
            commands::fmax(k, enumerate, multistart, seed, &config, timestamp)
        }
        Command::Sweep { k, grid, out } => commands::sweep(k, grid, &out, &config),
        Command::Probe { alpha, order } => commands::probe(alpha, order, &config, timestamp),
    }
}
