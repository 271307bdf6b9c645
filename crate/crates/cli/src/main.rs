//! `padic`: build and transform test functions on ℚₚⁿ, pair them with
//! distributions, apply pseudo-differential operators and run the wavelet,
//! Tauberian and acceptance suites.
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 verification failure.
//! Errors are printed as a single `error[code]: message` line on stderr.
//! `PADIC_THREADS` caps the worker threads; output does not depend on it.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use padic_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "padic",
    version,
    about = "p-adic test functions, distributions and pseudo-differential operators"
)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Config {
    /// Print the machine-readable JSON report instead of the human table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Tolerance for verification checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Largest grid, in cells, that may be allocated.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_cells: u128,
    /// Digits after the decimal point in human output.
    #[arg(long, global = true, default_value_t = 15)]
    pub precision: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build, inspect and evaluate test functions.
    #[command(subcommand, name = "fn")]
    Function(FnCommand),
    /// Fourier transform of a test function file.
    Fourier {
        #[arg(long = "in")]
        input: PathBuf,
        /// Apply the inverse transform.
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lizorkin membership and projection.
    #[command(subcommand)]
    Lizorkin(LizorkinCommand),
    /// Γₚ⁽ⁿ⁾(α), or Γₚ(π_α) for a tame character; prints the value or the pole.
    Gamma {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Index of the tame character π₁ (0 is trivial; one dimension only).
        #[arg(long, default_value_t = 0)]
        pi1: u64,
    },
    /// ⟨f, φ⟩ for a catalog distribution and a test function file.
    Pair {
        /// Distribution spec, e.g. `abs_alpha_minus_n:alpha=1.7` or `pi_alpha:alpha=0.5;pi1=1`.
        #[arg(long)]
        dist: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Apply or invert a pseudo-differential operator.
    #[command(subcommand)]
    Op(OpCommand),
    /// Kozyrev wavelets.
    #[command(subcommand)]
    Wavelet(WaveletCommand),
    /// Quasi-asymptotic limits and the per-scale Tauberian identities.
    #[command(subcommand)]
    Taub(TaubCommand),
    /// Run the acceptance suite (criteria 1–11).
    Selftest {
        #[arg(long, default_value_t = padic_core::selftest::DEFAULT_SEED)]
        seed: u64,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FnCommand {
    /// Build a test function: omega, ball, delta, coset, random or lizorkin.
    Build(BuildArgs),
    /// Grid, integral, norms and Lizorkin membership of a test function.
    Info {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Value at a point given as comma-separated rationals, e.g. `1/3,2`.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    pub shape: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Radius exponent of `ball` (`1_{B_k}`), `delta` (`δ_k`) or `coset`.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub k: i64,
    /// Center of `coset`, comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    /// Grid of `random` and `lizorkin`.
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub l: i64,
    #[arg(long = "big-n", default_value_t = 1, allow_hyphen_values = true)]
    pub big_n: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Integer coefficients are drawn from `[-bound, bound]`.
    #[arg(long, default_value_t = 5)]
    pub bound: i64,
    /// Lizorkin kind for `lizorkin`: first or second.
    #[arg(long, default_value = "second")]
    pub kind: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum LizorkinCommand {
    /// Exit 2 when the function is not in the Lizorkin space.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "second")]
        kind: String,
    },
    /// Remove the spectrum near the origin at scale `t`.
    Project {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "second")]
        kind: String,
        /// Scale as a rational, e.g. `1/4`.
        #[arg(long)]
        t: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct OpArgs {
    /// Symbol spec: `taibleson:alpha=0.5`, `vladimirov:alphas=1,-1`,
    /// `poly:coeffs=1,0,2;alpha=1`, `laplacian1`, `laplacian2`.
    #[arg(long, allow_hyphen_values = true)]
    pub symbol: String,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Lizorkin kind of the input; defaults to first for symbols that need it.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum OpCommand {
    Apply(OpArgs),
    /// Solve `A u = g`.
    Solve(OpArgs),
}

#[derive(Args, Debug)]
pub struct WaveletArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: i64,
    #[arg(long)]
    pub j: u64,
    /// Shift as a rational `k/p^d` in `[0, 1)`.
    #[arg(long, default_value = "0")]
    pub a: String,
}

#[derive(Subcommand, Debug)]
pub enum WaveletCommand {
    Build {
        #[command(flatten)]
        index: WaveletArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residual of `D^α Θ = p^{α(1−γ)} Θ`.
    Eigencheck {
        #[command(flatten)]
        index: WaveletArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Deviation of the Gram matrix from the identity.
    Gram {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
        gamma_min: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        gamma_max: i64,
        #[arg(long, default_value_t = 1)]
        depth: u32,
    },
}

#[derive(Args, Debug)]
pub struct TaubArgs {
    /// Distribution spec, as for `pair`.
    #[arg(long, allow_hyphen_values = true)]
    pub dist: String,
    /// Automodel spec, e.g. `power:alpha=0.5;pi1=0;m=1`.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: String,
    #[arg(long = "k-min", default_value_t = 1)]
    pub k_min: i64,
    #[arg(long = "k-max", default_value_t = 8)]
    pub k_max: i64,
}

#[derive(Subcommand, Debug)]
pub enum TaubCommand {
    /// The sequence `s_k` of `⟨f(t_k x), φ⟩/ρ(t_k)`; exit 2 unless it stabilizes.
    QuasiLimit {
        #[command(flatten)]
        args: TaubArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "infinity")]
        direction: String,
    },
    /// Fourier change-of-variables identity.
    Th5 {
        #[command(flatten)]
        args: TaubArgs,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Vladimirov identity on a first-kind Lizorkin function.
    Th7 {
        #[command(flatten)]
        args: TaubArgs,
        #[arg(long = "in")]
        input: PathBuf,
        /// Orders `β_j`, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Taibleson identity on a second-kind Lizorkin function.
    Th8 {
        #[command(flatten)]
        args: TaubArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Increments of the primitive `D^{−N} f` against `C·Γₚ(π_α)/Γₚ(π_{α+N})`.
    Th9 {
        #[command(flatten)]
        args: TaubArgs,
        #[arg(long)]
        p: u64,
        #[arg(long = "c", allow_hyphen_values = true, default_value = "1")]
        c: String,
        #[arg(long = "big-n")]
        big_n: u32,
    },
    /// Identity for a symbol homogeneous of degree `π_β`.
    Th10 {
        #[command(flatten)]
        args: TaubArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        symbol: String,
        /// Degree `β` of the symbol, so `A(tξ) = |t|^β A(ξ)` for the trivial `π₁`.
        #[arg(long, allow_hyphen_values = true)]
        degree: String,
        #[arg(long, default_value_t = 0)]
        degree_pi1: u64,
    },
}

fn init_threads() -> Result<(), Error> {
    let Ok(value) = std::env::var("PADIC_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            Error::Parse(format!(
                "PADIC_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Domain(format!("cannot start the thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let summary: Vec<&str> = rendered
                .lines()
                .map(str::trim)
                .take_while(|line| !line.is_empty())
                .collect();
            eprintln!(
                "error[usage]: {} (see padic --help)",
                summary.join(" ").trim_start_matches("error: ")
            );
            return ExitCode::from(1);
        }
    };
    let result = init_threads().and_then(|()| commands::run(cli.command, &cli.config));
    match result {
        Ok(outcome) => outcome.emit(&cli.config),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
