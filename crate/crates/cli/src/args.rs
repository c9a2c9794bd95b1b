use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use padic_sums::kernel::parse_rational;
use padic_sums::{Prime, Sign};

#[derive(Parser, Debug)]
#[command(name = "padic-sums", version, about = "Exact generating polynomials and p-adic summation checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Directory for cached tables.
    #[arg(long, global = true, env = "PADIC_SUMS_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Bypass the table cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    /// Evaluate grid cells one at a time.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate A, U, V tables and the integer pairs u, v.
    Tables {
        #[arg(long, default_value_t = 11)]
        kmax: usize,
        /// Restrict to one sign; both when omitted.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        eps: Option<Sign>,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Emit a named integer sequence, e.g. `A+0,1`, `A-(1;-1)`, `U-(1)`.
    Seq {
        #[arg(allow_hyphen_values = true)]
        id: String,
        #[arg(long, default_value_t = 10)]
        kmax: usize,
    },
    /// Compare a named sequence with a reference b-file, term by term up to sign.
    SeqCompare {
        #[arg(allow_hyphen_values = true)]
        id: String,
        reference: PathBuf,
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        /// Our index `i` is compared with reference index `i + offset`.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i64,
    },
    /// Inspect or clear the table cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum CacheAction {
    Info,
    Clear,
}

#[derive(Subcommand, Debug)]
pub enum Suite {
    /// Finite summation identity over a (k, eps, x, n) grid.
    Finite(FiniteArgs),
    /// Telescoping identity for named and seeded random parameter sets.
    Telescope(TelescopeArgs),
    /// p-adic remainder bounds for the infinite sums, or for one claimed value.
    Padic(PadicArgs),
    /// Differential-equation residuals of the truncated factorial series.
    Ode(OdeArgs),
    /// Every suite with its default grid.
    All(AllArgs),
}

#[derive(Args, Debug)]
pub struct FiniteArgs {
    #[arg(long, default_value_t = 15)]
    pub kmax: usize,
    #[arg(long = "n-max", visible_alias = "N", default_value_t = 25)]
    pub n_max: u64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    pub eps: Option<Sign>,
    /// Comma-separated exact rationals.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rat)]
    pub x: Vec<BigRational>,
}

#[derive(Args, Debug)]
pub struct TelescopeArgs {
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Number of random parameter sets.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long = "n-max", visible_alias = "N", default_value_t = 15)]
    pub n_max: u64,
}

#[derive(Args, Debug)]
pub struct PadicArgs {
    #[arg(long, default_value_t = 8)]
    pub kmax: usize,
    #[arg(long, value_delimiter = ',', value_parser = parse_prime, default_value = "2,3,5,7,11")]
    pub primes: Vec<Prime>,
    #[arg(long = "n-max", visible_alias = "N", default_value_t = 200)]
    pub n_max: u64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    pub eps: Option<Sign>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rat)]
    pub x: Vec<BigRational>,
    /// Check this value as the sum of one series instead of running the grid.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rat)]
    pub claim: Option<BigRational>,
    /// Power `k` of the claimed series (with `--claim`).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Coefficients `C_1..C_k` of a general series (with `--claim`); overrides `--k`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rat)]
    pub coeffs: Vec<BigRational>,
    /// Digits of the claimed value's p-adic expansion to report.
    #[arg(long, default_value_t = 8)]
    pub precision: usize,
}

#[derive(Args, Debug)]
pub struct OdeArgs {
    /// Largest truncation order; orders 3..=N are checked.
    #[arg(long = "n-max", visible_alias = "N", default_value_t = 50)]
    pub n_max: usize,
}

#[derive(Args, Debug)]
pub struct AllArgs {
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
    Bfile,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse().map_err(|e: padic_sums::Error| e.to_string())
}

fn parse_rat(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let p: u64 = s.trim().parse().map_err(|_| format!("{s:?} is not an integer"))?;
    Prime::new(p).map_err(|e| e.to_string())
}
