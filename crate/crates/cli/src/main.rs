//! `sendov`: construct, verify, tabulate, probe and audit extremal candidates.
//!
//! Exit codes: 0 success, 1 a property or criterion failed, 2 bad input or
//! configuration.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "sendov", version, about = "Locally extremal polynomials for Sendov's conjecture")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for candidates of degree n and certify them.
    Construct(ConstructArgs),
    /// Certify one candidate file against properties A-H.
    Verify(VerifyArgs),
    /// Rebuild and certify every published degree.
    Table(TableArgs),
    /// Randomly perturb a candidate looking for improvements.
    Probe(ProbeArgs),
    /// Compare analytic root derivatives with finite differences.
    Derivcheck(DerivArgs),
}

#[derive(Args)]
struct Source {
    /// Candidate JSON file.
    #[arg(long = "in", value_name = "FILE", conflicts_with = "n")]
    input: Option<PathBuf>,
    /// Published degree, solved from the bundled seed.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    n: usize,
    /// JSON array of seed vectors; defaults to the bundled seed for n.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Seed from the coarse discovery grid instead.
    #[arg(long, conflicts_with = "input")]
    discover: bool,
    /// Certified candidates with their reports.
    #[arg(long, default_value = "construct.json")]
    out: PathBuf,
    /// Per-seed log, one JSON object per line.
    #[arg(long, default_value = "construct_log.jsonl")]
    report: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
}

#[derive(Args)]
struct TableArgs {
    /// Reference file replacing the bundled one.
    #[arg(long, value_name = "FILE")]
    seeds: Option<PathBuf>,
    /// Largest allowed deviation from the reference values.
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long, default_value = "table.json")]
    out: PathBuf,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 1e-3)]
    scale: f64,
    #[arg(long, default_value_t = 1)]
    rng_seed: u64,
    #[arg(long, default_value = "probe.json")]
    out: PathBuf,
}

#[derive(Args)]
struct DerivArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value = "derivcheck.json")]
    out: PathBuf,
    /// Test hook: corrupt the beta derivative before comparing.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Verify(a) => commands::verify(a),
        Command::Table(a) => commands::table(a),
        Command::Probe(a) => commands::probe(a),
        Command::Derivcheck(a) => commands::derivcheck(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
