use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "powercone", version, about = "Sums of fourth powers of binary quadratics: membership, decomposition, faces and constructions")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Decision band for membership and boundary answers.
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive_f64)]
    pub tol: f64,
    /// Multistart budget.
    #[arg(long, global = true, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Solver iteration cap.
    #[arg(long, global = true, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Mantissa bits for extended-precision evaluations.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u32).range(100..))]
    pub precision_bits: u32,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s}")),
    }
}

/// Where to read a form: a path, `-` for stdin, or `--file`.
#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Input path, or `-` for stdin (the default).
    pub input: Option<String>,
    #[arg(long, conflicts_with = "input")]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Signed distance of an octic (or quartic) to the boundary of the cone, with a dual certificate.
    Member(Input),
    /// Real representations as sums of k fourth powers of quadratics.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=4))]
        k: u64,
    },
    /// Face type of a boundary octic.
    Classify(Input),
    /// Check that a boundary octic is not a sum of two squares of nonnegative quartics.
    Reznick(Input),
    /// Apolar ideal, catalecticant ranks and cube divisors of a binary form.
    Apolar(Input),
    /// Translate between an octic functional and its quartic in the dual subspace.
    DualQuartic(Input),
    /// The 15×15 system for quartics with double zeros at three points.
    BoundarySystem {
        /// Three points `p; q; r`, coordinates comma separated, rationals allowed.
        #[arg(long, required_unless_present = "example")]
        points: Option<String>,
        /// Use the three-zero example points at `--precision-bits`.
        #[arg(long, conflicts_with = "points")]
        example: bool,
    },
    /// Rank drop of the differential at a triple of quadratics `q1; q2; q3`.
    OnG {
        #[command(flatten)]
        input: Input,
        /// Sample a triple on the hypersurface from `--seed` instead of reading one.
        #[arg(long, conflicts_with_all = ["example", "input", "file"])]
        sample: bool,
        /// Use the three-zero example triple.
        #[arg(long, conflicts_with_all = ["input", "file"])]
        example: bool,
    },
    /// The polynomial ladder F₁, …, F_n.
    Ladder {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        s: u32,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
        n: u64,
        /// Comma separated exponents r₁, r₂, …
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<u64>>,
    },
    /// Dimension-count bounds on the Pythagoras number.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
    },
    /// Strict admissibility of a bivariate polynomial, optionally after a linear change of coordinates.
    Admissible {
        #[command(flatten)]
        input: Input,
        /// Matrix `a,b;c,d` applied as x ↦ ax + by, y ↦ cx + dy.
        #[arg(long)]
        via: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Member(_) => "member",
            Command::Decompose { .. } => "decompose",
            Command::Classify(_) => "classify",
            Command::Reznick(_) => "reznick",
            Command::Apolar(_) => "apolar",
            Command::DualQuartic(_) => "dual-quartic",
            Command::BoundarySystem { .. } => "boundary-system",
            Command::OnG { .. } => "on-g",
            Command::Ladder { .. } => "ladder",
            Command::Bounds { .. } => "bounds",
            Command::Admissible { .. } => "admissible",
        }
    }
}
