//! Command-line surface: each subcommand reproduces one table of the
//! library's results as CSV or JSON with a metadata header, deterministically
//! for a fixed seed.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical
//! non-convergence, 4 verification failure.

mod config;
mod output;
mod run;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "cvbench", version, about = "Classical fidelity thresholds for single-mode Gaussian states", max_term_width = 100)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// RNG seed for every stochastic step (echoed in output metadata)
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker-count hint; evaluation is sequential and deterministic, the
    /// hint is recorded in metadata only
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,

    /// Output format
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    pub format: Option<String>,

    /// TOML configuration file; command-line flags override its values
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form thresholds, optionally cross-checked numerically
    Cft(run::CftArgs),
    /// Operator-route eigenvalue verification (squeezed or Gaussian blocks)
    Eigencheck(run::EigencheckArgs),
    /// Optimized square-root-measurement fidelity against the threshold
    SrmScan(run::SrmScanArgs),
    /// Average teleportation fidelity map with benchmark comparisons
    TeleportMap(run::TeleportMapArgs),
    /// Resource squeezing needed to beat the benchmark
    Threshold(run::ThresholdArgs),
    /// Draw states from a prior ensemble
    SamplePrior(run::SamplePriorArgs),
    /// Run the full verification suite
    VerifyAll(run::VerifyAllArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
