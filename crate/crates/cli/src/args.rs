use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kneadlab::entropy::{DEFAULT_ENTROPY_SLACK, DEFAULT_SWEEP_NMAX};
use kneadlab::inverse::{DEFAULT_INVERT_TOL, DEFAULT_LEVEL_TOL};
use kneadlab::kneading::{DEFAULT_C_TOL, DEFAULT_MAX_LEN};
use kneadlab::solver::DEFAULT_SOLVE_TOL;
use kneadlab::sweep::DEFAULT_SWEEP_TRUNC;
use kneadlab::{BuiltinFamily, Word};

#[derive(Debug, Parser)]
#[command(
    name = "kneadlab",
    version,
    about = "Kneading sequences of unimodal families"
)]
pub struct Cli {
    /// Write results to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FamilyArg {
    #[arg(long, value_parser = parse_family)]
    pub family: BuiltinFamily,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kneading sequence K(mu f).
    Knead {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, value_parser = parse_unit)]
        mu: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN, value_parser = parse_positive_usize)]
        len: usize,
        #[arg(long, default_value_t = DEFAULT_C_TOL, value_parser = parse_positive)]
        ctol: f64,
    },
    /// Parity-lexicographic comparison of two words.
    Compare {
        #[arg(long, value_parser = parse_word)]
        a: Word,
        #[arg(long, value_parser = parse_word)]
        b: Word,
    },
    /// Whether a word is shift-maximal.
    Shiftmax {
        #[arg(long, value_parser = parse_word)]
        word: Word,
    },
    /// Level function value for a branch word over {L, R}.
    Level {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        word: String,
        #[arg(long, value_parser = parse_unit)]
        mu: f64,
        #[arg(long, default_value_t = DEFAULT_INVERT_TOL, value_parser = parse_positive)]
        tol: f64,
    },
    /// Fixed points of the level function of a finite word.
    Superstable {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, value_parser = parse_word)]
        word: Word,
        #[arg(long, default_value_t = 0.0, value_parser = parse_unit)]
        lo: f64,
        #[arg(long, default_value_t = 1.0, value_parser = parse_unit)]
        hi: f64,
        #[arg(long, default_value_t = DEFAULT_LEVEL_TOL, value_parser = parse_positive)]
        tol: f64,
    },
    /// Superstable parameter realizing a finite word.
    Solve {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, value_parser = parse_word)]
        word: Word,
        #[arg(long, value_parser = parse_unit, requires = "hi")]
        lo: Option<f64>,
        #[arg(long, value_parser = parse_unit, requires = "lo")]
        hi: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SOLVE_TOL, value_parser = parse_positive)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_C_TOL, value_parser = parse_positive)]
        ctol: f64,
    },
    /// Superstable parameters of every admissible word up to a period.
    SolveAll {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=24))]
        max_period: u32,
        #[arg(long, default_value_t = DEFAULT_SOLVE_TOL, value_parser = parse_positive)]
        tol: f64,
    },
    /// Admissible word counts by period against the counting formula.
    Census {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=24))]
        max_period: u32,
        /// Include the words themselves.
        #[arg(long)]
        list: bool,
    },
    /// Topological entropy estimate from lap-number growth.
    Entropy {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, value_parser = parse_unit)]
        mu: f64,
        #[arg(long, default_value_t = DEFAULT_SWEEP_NMAX, value_parser = parse_nmax)]
        nmax: usize,
    },
    /// Lap entropy on a uniform parameter grid, checked for monotonicity.
    EntropySweep {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value_t = 2000, value_parser = parse_grid)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_SWEEP_NMAX, value_parser = parse_nmax)]
        nmax: usize,
        #[arg(long, default_value_t = DEFAULT_ENTROPY_SLACK, value_parser = parse_nonnegative)]
        slack: f64,
    },
    /// Minimum Schwarzian derivative of the inverse branches on a grid.
    Schwarzian {
        #[command(flatten)]
        family: FamilyArg,
        /// Grid shape as `N_MUxN_Y`.
        #[arg(long, default_value = "50x50", value_parser = parse_grid_shape)]
        grid: (usize, usize),
    },
    /// Kneading monotonicity sweep on a uniform parameter grid.
    Sweep {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value_t = 10_000, value_parser = parse_grid)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_SWEEP_TRUNC, value_parser = parse_positive_usize)]
        len: usize,
        #[arg(long, default_value_t = DEFAULT_C_TOL, value_parser = parse_positive)]
        ctol: f64,
    },
}

fn parse_family(s: &str) -> Result<BuiltinFamily, String> {
    s.parse().map_err(|e: kneadlab::KneadError| e.to_string())
}

fn parse_word(s: &str) -> Result<Word, String> {
    s.parse().map_err(|e: kneadlab::KneadError| e.to_string())
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

fn parse_nonnegative(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("must be nonnegative, got {v}"))
    }
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("must lie in [0, 1], got {v}"))
    }
}

fn parse_positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("must be a positive integer, got {s:?}")),
    }
}

fn parse_grid(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        _ => Err(format!("grid size must be an integer >= 2, got {s:?}")),
    }
}

fn parse_nmax(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= kneadlab::entropy::MIN_ENTROPY_NMAX => Ok(n),
        _ => Err(format!(
            "nmax must be an integer >= {}, got {s:?}",
            kneadlab::entropy::MIN_ENTROPY_NMAX
        )),
    }
}

fn parse_grid_shape(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected N_MUxN_Y, got {s:?}"))?;
    Ok((parse_grid(a.trim())?, parse_grid(b.trim())?))
}
