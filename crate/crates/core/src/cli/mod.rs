//! `ising-series` command line: argument parsing, configuration merge, report output.

mod commands;

use crate::config::ConfigFile;
use crate::error::Error;
use crate::report::{Report, EXIT_ERROR, EXIT_OK, EXIT_PARTIAL, EXIT_USAGE};
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::PathBuf;

pub use commands::{cmd_ht_expand, cmd_loops, cmd_oracle, cmd_pt_solve, cmd_sc_series};

/// Environment variable read for the worker-thread count when `--threads` is absent.
pub const THREADS_ENV: &str = "ISING_THREADS";

#[derive(Debug, Parser)]
#[command(name = "ising-series", version, about = "Ising high-temperature series, loop sums and oracles")]
pub struct Cli {
    /// key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the report rows as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Worker threads (default: $ISING_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Triangular lattice: critical point, free energy, specific-heat fit.
    PtSolve(PtSolveArgs),
    /// Cubic lattice: filtered Ψ^{1/2} and log Ψ series against brute-force counts.
    ScSeries(ScSeriesArgs),
    /// Window product expansion on SQ or SC.
    HtExpand(HtExpandArgs),
    /// Exhaustive partition sums and even-subgraph counts.
    Oracle(OracleArgs),
    /// Loop examples and the Whitney parity survey.
    Loops(LoopsArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct PtSolveArgs {
    /// Coupling J.
    #[arg(long = "J")]
    pub j: Option<f64>,
    /// Continuum integrand: planar or printed.
    #[arg(long)]
    pub theta: Option<String>,
    /// Report Φ/(NT) at this x = tanh(J/T) only.
    #[arg(long)]
    pub at_x: Option<f64>,
    /// Comma-separated temperatures for the free-energy grid.
    #[arg(long)]
    pub temps: Option<String>,
    /// |x − x_c| range for the specific-heat fit, as LO:HI.
    #[arg(long)]
    pub fit_window: Option<String>,
    /// Fit points on each side of x_c.
    #[arg(long)]
    pub fit_points: Option<usize>,
    /// Gauss–Legendre points per axis per cell.
    #[arg(long)]
    pub gauss_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScSeriesArgs {
    #[arg(long)]
    pub order: Option<usize>,
    /// Maximum monomials per series coefficient.
    #[arg(long)]
    pub term_budget: Option<usize>,
    /// Maximum search nodes for the brute-force counts.
    #[arg(long)]
    pub enum_budget: Option<u64>,
    /// Compare the tagged determinant with the printed one.
    #[arg(long)]
    pub check_det: bool,
    /// Also run the all-tags-to-1 reduction.
    #[arg(long)]
    pub naive: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct HtExpandArgs {
    /// sq or sc.
    #[arg(long)]
    pub lattice: Option<String>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub radius: Option<usize>,
    /// Keep both directions of every bond (one factor per printed family entry).
    #[arg(long)]
    pub literal: bool,
    /// Keep only terms containing the centre spin.
    #[arg(long)]
    pub through_center: bool,
    /// Maximum live states in the expansion.
    #[arg(long)]
    pub state_budget: Option<usize>,
    /// Compare with even-subgraph enumeration on the same window.
    #[arg(long)]
    pub oracle: bool,
    /// Expand the full partition polynomial of a finite lattice of side L instead.
    #[arg(long)]
    pub full: bool,
    #[arg(long = "L")]
    pub side: Option<usize>,
    /// Open boundary for --full.
    #[arg(long)]
    pub open: bool,
    #[arg(long)]
    pub enum_budget: Option<u64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OracleArgs {
    /// chain, sq, pt or sc.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Side length (all axes).
    #[arg(long = "L")]
    pub side: Option<usize>,
    /// Comma-separated side lengths, overriding --L.
    #[arg(long)]
    pub sides: Option<String>,
    #[arg(long)]
    pub open: bool,
    /// Exhaustive spin sum, cross-checked against the cycle space and the product expansion.
    #[arg(long)]
    pub exhaustive: bool,
    /// Largest r for even-subgraph counts.
    #[arg(long)]
    pub order: Option<usize>,
    /// Restrict counts to subgraphs through the central site.
    #[arg(long)]
    pub through_center: bool,
    /// Infinite-lattice per-site counts and log series instead of a finite lattice.
    #[arg(long)]
    pub per_site: bool,
    #[arg(long)]
    pub enum_budget: Option<u64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct LoopsArgs {
    /// Reference graphs and their values after the counting actions.
    #[arg(long)]
    pub examples: bool,
    /// Whitney parity survey up to this loop length.
    #[arg(long)]
    pub whitney: Option<usize>,
    /// planar or printed triangular layout for the survey.
    #[arg(long)]
    pub geometry: Option<String>,
    /// none, reversal or cyclic-shift.
    #[arg(long)]
    pub dedup: Option<String>,
    #[arg(long)]
    pub node_budget: Option<u64>,
}

fn init_threads(cli: Option<usize>) -> Result<(), String> {
    let n = match cli {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(s) => Some(s.trim().parse().map_err(|_| format!("{THREADS_ENV}={s:?} is not a count"))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Run one command on an already parsed command line.
pub fn execute(cli: &Cli) -> crate::Result<Report> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    match &cli.command {
        Command::PtSolve(a) => cmd_pt_solve(a, &cfg),
        Command::ScSeries(a) => cmd_sc_series(a, &cfg),
        Command::HtExpand(a) => cmd_ht_expand(a, &cfg),
        Command::Oracle(a) => cmd_oracle(a, &cfg),
        Command::Loops(a) => cmd_loops(a, &cfg),
    }
}

/// Full entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(msg) = init_threads(cli.threads) {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                Error::Invalid(_) | Error::TooLarge(_) => EXIT_USAGE,
                Error::Budget { .. } => EXIT_PARTIAL,
                _ => EXIT_ERROR,
            };
        }
    };
    let written = match &cli.out {
        Some(p) => report.write_json(p),
        None => {
            print!("{}", report.to_json());
            Ok(())
        }
    }
    .and_then(|_| match &cli.csv {
        Some(p) => report.write_csv(std::fs::File::create(p)?),
        None => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_ERROR;
    }
    report.status.exit_code()
}
