//! Command-line front end for `cdiff-core`: argument parsing, batch sweeps
//! and JSON/CSV/table reports.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on invalid input, 3 when a size budget is exceeded.

pub mod args;
pub mod commands;
pub mod report;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use cdiff_core::Error;

use crate::args::{Cli, Command, Format};
use crate::report::{align, multiset, write_rows, RowVerdict, Tabular};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Budget(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Budget(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Rows go to `--output` or stdout; notes (multiset line, per-claim results,
/// scan summary) go to stdout unless stdout is carrying JSON or CSV rows.
struct Sinks {
    rows: Box<dyn Write>,
    notes: Box<dyn Write>,
}

impl Sinks {
    fn open(cli: &Cli) -> Result<Sinks, CliError> {
        let rows: Box<dyn Write> = match &cli.output {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(io::stdout().lock()),
        };
        let notes: Box<dyn Write> = if cli.output.is_some() || cli.format == Format::Table {
            Box::new(io::stdout())
        } else {
            Box::new(io::stderr())
        };
        Ok(Sinks { rows, notes })
    }

    fn note(&mut self, line: &str) -> io::Result<()> {
        writeln!(self.notes, "{line}")
    }

    fn emit<R: Tabular>(&mut self, rows: &[R], format: Format) -> io::Result<()> {
        write_rows(rows, format, &mut self.rows)?;
        self.rows.flush()
    }
}

fn status(verdicts: impl IntoIterator<Item = RowVerdict>) -> u8 {
    if verdicts.into_iter().any(|v| v == RowVerdict::Fail) {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

/// Runs one parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let limits = commands::limits(cli.max_q)?;
    let format = cli.format;
    match &cli.command {
        Command::Spectrum(a) => {
            let row = commands::spectrum_row(a, limits)?;
            let mut out = Sinks::open(cli)?;
            out.note(&multiset(&row.omega))?;
            out.emit(std::slice::from_ref(&row), format)?;
            Ok(status([row.verdict]))
        }
        Command::Charsum(a) => {
            let row = commands::charsum_row(a, limits)?;
            let mut out = Sinks::open(cli)?;
            out.emit(std::slice::from_ref(&row), format)?;
            Ok(status([row.verdict]))
        }
        Command::Verify(a) => {
            let (row, verdict) = commands::verify(a, limits)?;
            let mut out = Sinks::open(cli)?;
            for line in commands::claim_lines(&verdict) {
                out.note(&line)?;
            }
            out.emit(std::slice::from_ref(&row), format)?;
            Ok(status([row.verdict]))
        }
        Command::Scan(a) => {
            let results = commands::scan(a, limits)?;
            let mut out = Sinks::open(cli)?;
            let mut rows = Vec::with_capacity(results.len());
            for (row, diag) in results {
                if let Some(d) = diag {
                    eprintln!("{d}");
                }
                rows.push(row);
            }
            align(&mut rows);
            out.emit(&rows, format)?;
            let count = |v| rows.iter().filter(|r| r.verdict == v).count();
            out.note(&format!(
                "summary: {} fields, {} pass, {} fail, {} skipped",
                rows.len(),
                count(RowVerdict::Pass),
                count(RowVerdict::Fail),
                count(RowVerdict::Skipped)
            ))?;
            Ok(status(rows.iter().map(|r| r.verdict)))
        }
        Command::Bound(a) => {
            let row = commands::bound_row(a, limits)?;
            let mut out = Sinks::open(cli)?;
            out.emit(std::slice::from_ref(&row), format)?;
            Ok(status([row.verdict]))
        }
    }
}
