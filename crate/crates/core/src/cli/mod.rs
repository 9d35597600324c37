//! Scenario-driven batch runner behind the `bpcheck` binary.
//!
//! Exit codes: 0 when every check matches its expectation, 1 when some check
//! does not, 2 for an unreadable or invalid scenario or an unknown check id,
//! 3 for an internal error such as a failed report write.

pub mod registry;
pub mod report;
pub mod scenario;

pub use registry::{catalog_listing, execute, plan, Job, Planned, CHECK_KINDS};
pub use report::{strip_timing, CheckRecord, RunReport, Status};
pub use scenario::{Expect, Overrides, Scenario};

use crate::error::{Error, Result};
use crate::poisson::Backend;
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "bpcheck", version, about = "Run verification scenarios for quadratic Poisson algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every check of a scenario file and write a JSON report.
    Run {
        scenario: PathBuf,
        /// symbolic or modular
        #[arg(long)]
        backend: Option<String>,
        /// Prime modulus for the modular backend.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Sample points per modular check.
        #[arg(long)]
        trials: Option<usize>,
        /// Report path; defaults to the scenario's `report`, else standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Print algebra families, check kinds and identity catalog entries.
    List,
}

/// Validate and run a scenario on a pool of `jobs` threads.
pub fn run_scenario(scn: &Scenario, jobs: usize) -> Result<RunReport> {
    let planned = plan(scn)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Io(format!("thread pool: {e}")))?;
    let records: Vec<CheckRecord> = pool.install(|| {
        planned
            .par_iter()
            .map(|p| {
                let t0 = Instant::now();
                let out = execute(&p.job, &p.opts);
                CheckRecord::new(p, out, t0.elapsed().as_millis() as u64)
            })
            .collect()
    });
    Ok(RunReport::new(scn, records))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Schema(_) | Error::UnknownCheck(_) => EXIT_SCHEMA,
        _ => EXIT_INTERNAL,
    }
}

fn run_command(path: &Path, ov: Overrides, report: Option<PathBuf>, jobs: usize) -> Result<i32> {
    let mut scn = Scenario::load(path).map_err(|e| match e {
        Error::Io(m) => Error::Schema(format!("cannot read scenario: {m}")),
        e => e,
    })?;
    scn.apply(&ov);
    let rep = run_scenario(&scn, jobs)?;
    for c in &rep.checks {
        let mark = if c.matched { "ok  " } else { "FAIL" };
        let why = c.witness.as_deref().or(c.detail.as_deref()).unwrap_or("");
        eprintln!("{mark} {:<13} {} {}", c.status.as_str(), c.id, why);
    }
    let s = &rep.summary;
    eprintln!(
        "{}: {} checks, {} pass, {} expected-fail, {} fail, {} error, {} mismatched",
        rep.scenario.name, s.total, s.pass, s.expected_fail, s.fail, s.error, s.mismatched
    );
    match report.or_else(|| scn.report.as_ref().map(PathBuf::from)) {
        Some(p) => rep.write_atomic(&p)?,
        None => print!("{}", rep.to_json()),
    }
    Ok(if rep.all_matched() { EXIT_OK } else { EXIT_MISMATCH })
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCHEMA } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::List => {
            print!("{}", catalog_listing());
            EXIT_OK
        }
        Command::Run { scenario, backend, prime, seed, trials, report, jobs } => {
            let backend = match backend.as_deref().map(|b| (b, Backend::parse(b))) {
                None => None,
                Some((_, Some(b))) => Some(b),
                Some((b, None)) => {
                    eprintln!("error: unknown backend `{b}`");
                    return EXIT_SCHEMA;
                }
            };
            let ov = Overrides { backend, prime, seed, trials };
            match run_command(&scenario, ov, report, jobs) {
                Ok(code) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code(&e)
                }
            }
        }
    }
}
