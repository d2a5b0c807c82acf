//! Command-line driver for `dcat-core`: entropy sweeps, information
//! diagrams, limit tables and oracle checks, written as CSV or NDJSON.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure
//! (non-convergence, indeterminate limit, failed oracle check),
//! 3 cap exceeded.

pub mod cli;
pub mod config;
pub mod error;
pub mod oracle_check;
pub mod records;
pub mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::error::CliError;
use crate::records::Table;

/// What a run produced before any failure it reports.
fn execute(cmd: &Command) -> Result<(Table, Option<CliError>), CliError> {
    Ok(match cmd {
        Command::Grid(a) => (sweep::run_grid(a)?, None),
        Command::Angular(a) => (sweep::run_angular(a)?, None),
        Command::Infodiag(a) => (sweep::run_infodiag(a)?, None),
        Command::Limit(a) => (sweep::run_limit(a)?, None),
        Command::OracleCheck(a) => {
            let (table, failures) = oracle_check::run_oracle_check(a)?;
            let err = (failures > 0).then(|| {
                CliError::Numerical(format!(
                    "{failures} of {} oracle cases deviate by more than {:e}",
                    table.rows.len(),
                    dcat_core::oracle::PASS_TOLERANCE
                ))
            });
            (table, err)
        }
    })
}

/// Runs a parsed command and writes its output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let common = cli.command.common();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = common.workers {
        if w == 0 {
            return Err(CliError::usage("--workers must be positive"));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::usage(format!("cannot start workers: {e}")))?;
    let (table, failure) = pool.install(|| execute(&cli.command))?;
    let mut out: Box<dyn Write> = match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    table.write(common.format, &mut out)?;
    out.flush()?;
    failure.map_or(Ok(()), Err)
}

/// Full entry point over raw arguments; returns the process exit code.
pub fn main_with_args(args: Vec<String>) -> i32 {
    let args = match config::expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("dcat: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("dcat: {e}");
            e.exit_code()
        }
    }
}
