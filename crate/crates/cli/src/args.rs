use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cdiff",
    version,
    about = "Exact c-differential spectra of x^d over F_{p^n}"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format for the report rows.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Write report rows here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Largest field size accepted for construction and enumeration.
    #[arg(long, env = "CDIFF_MAX_Q", global = true)]
    pub max_q: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Brute-force spectrum of x^d with multiplier c.
    Spectrum(SpectrumArgs),
    /// Trace of one of the two Legendre curves, lifted to F_{p^n}.
    Charsum(CharsumArgs),
    /// Check every closed form that applies to one field.
    Verify(VerifyArgs),
    /// Verify every admissible field up to a size bound.
    Scan(ScanArgs),
    /// Largest c-differential uniformity over all multipliers c.
    Bound(FieldArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u64,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Exponent; defaults to (q + 3) / 2.
    #[arg(long)]
    pub d: Option<u64>,
    /// Multiplier: an integer, or coefficients "a0,a1,..." in F_p.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct CharsumArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// 1 for x(x+1)(x-3), 2 for x(x+1)(x-2).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub curve: u8,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Budgets {
    /// Largest q for the cubic direct N4 count.
    #[arg(long, default_value_t = 343)]
    pub n4_max: u64,
    /// Largest q for the sweep over all multipliers.
    #[arg(long, default_value_t = 343)]
    pub c_bound_max: u64,
    /// Largest q for the maximum over all (a, b).
    #[arg(long, default_value_t = 343)]
    pub full_uniformity_max: u64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub budgets: Budgets,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Include every admissible q up to this bound.
    #[arg(long)]
    pub q_max: u64,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub budgets: Budgets,
}
