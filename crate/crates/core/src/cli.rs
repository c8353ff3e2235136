//! Command-line front end.
//!
//! Exit codes: 0 uniformly nondivergent, 10 not uniformly nondivergent,
//! 2 configuration or I/O error, 3 failed audit or replay, 4 probe requested
//! on a nondivergent verdict.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::report::{replay, run, Command, ReplayError, Report, RunError, RunOptions, VerdictKind};

pub const EXIT_NONDIVERGENT: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_AUDIT: i32 = 3;
pub const EXIT_PROBE_VERDICT: i32 = 4;
pub const EXIT_DIVERGENT: i32 = 10;

#[derive(Parser, Debug)]
#[command(name = "nondiv", version, about = "Decide uniform nondivergence of A·M on arithmetic quotients of Res SL_n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Problem file (TOML).
    pub file: PathBuf,
    /// Worker threads; defaults to all cores. Does not change the report.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Run the criterion and report the verdict.
    Check(Common),
    /// Verdict, certificate replay, escape witness and decay table.
    Certify(Common),
    /// Certify, then probe shortest vectors along the divergence sequence.
    Probe {
        #[command(flatten)]
        common: Common,
        /// Sampler seed, decimal or 0x-prefixed hex; overrides `[probe] seed`.
        #[arg(long, value_parser = parse_seed)]
        seed: Option<u64>,
    },
    /// Recheck a report against a fresh run of its embedded problem.
    Replay {
        report: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn verdict_code(r: &Report) -> i32 {
    match r.verdict {
        VerdictKind::UniformlyNondivergent => EXIT_NONDIVERGENT,
        VerdictKind::NotUniformlyNondivergent => EXIT_DIVERGENT,
    }
}

fn read(path: &Path) -> Result<String, i32> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_CONFIG
    })
}

fn emit(report: &Report, output: Option<&Path>) -> Result<(), i32> {
    let json = report.to_json();
    match output {
        Some(path) => std::fs::write(path, json).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            EXIT_CONFIG
        }),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn summary(report: &Report) {
    let verdict = match report.verdict {
        VerdictKind::UniformlyNondivergent => "uniformly nondivergent",
        VerdictKind::NotUniformlyNondivergent => "not uniformly nondivergent",
    };
    match &report.certificate {
        Some(c) => eprintln!(
            "{verdict}: I = {:?}, w = {}, w' = #{}",
            c.subset, c.w, c.w_prime_index
        ),
        None => eprintln!("{verdict}"),
    }
}

fn execute(cmd: Command, common: &Common, seed: Option<u64>) -> Result<i32, i32> {
    let text = read(&common.file)?;
    let opts = RunOptions {
        workers: common.workers,
        seed,
    };
    let report = run(cmd, &text, opts).map_err(|e| {
        eprintln!("error: {e}");
        match e {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Audit(_) => EXIT_AUDIT,
            RunError::ProbeOnNondivergent(_) => EXIT_PROBE_VERDICT,
        }
    })?;
    emit(&report, common.output.as_deref())?;
    summary(&report);
    Ok(verdict_code(&report))
}

/// Run a parsed command line and return the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let result = match &cli.command {
        Cmd::Check(c) => execute(Command::Check, c, None),
        Cmd::Certify(c) => execute(Command::Certify, c, None),
        Cmd::Probe { common, seed } => execute(Command::Probe, common, *seed),
        Cmd::Replay { report, workers, output } => (|| {
            let text = read(report)?;
            let fresh = replay(&text, *workers).map_err(|e| {
                eprintln!("error: {e}");
                match e {
                    ReplayError::Config(_) | ReplayError::Unreadable(_) => EXIT_CONFIG,
                    ReplayError::Mismatch(_) => EXIT_AUDIT,
                }
            })?;
            emit(&fresh, output.as_deref())?;
            eprint!("replay ok; ");
            summary(&fresh);
            Ok(verdict_code(&fresh))
        })(),
    };
    result.unwrap_or_else(|code| code)
}
