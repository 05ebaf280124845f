use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use perdyn::oracle::DEFAULT_BUDGET;
use perdyn::padic::DEFAULT_PRECISION;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "perdyn",
    version,
    about = "Periodic points of polynomial maps over p-adic and quadratic fields"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Working precision in digits of the uniformizer.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: i64,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest finite ring the oracle may tabulate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Residue characteristic.
    #[arg(long)]
    pub p: u64,
    /// Residue degree.
    #[arg(long, default_value_t = 1)]
    pub f: usize,
    /// Ramification index.
    #[arg(long, default_value_t = 1)]
    pub e: usize,
    /// Eisenstein polynomial, either integral like "x^2 - 2" or as JSON
    /// coordinate lists like "[[-2],[0],[1]]". Defaults to x^e - p.
    #[arg(long, allow_hyphen_values = true)]
    pub eisenstein: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// x^d + c with d = p and random integral c.
    Unicritical,
    /// Random maps with good reduction and the degree condition.
    Star,
    /// Random monic prime-power-degree maps with middle coefficients in
    /// the maximal ideal.
    StarStar,
    /// x^2 + r/s for r in [-20, 20] and odd s.
    RationalC,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Periodic points of a polynomial over a local field.
    Periodic {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Dynatomic polynomial of a map with rational coefficients.
    Dynatomic {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Treat `c` as an indeterminate.
        #[arg(long)]
        symbolic_c: bool,
        #[arg(long, default_value_t = 1)]
        n: u64,
        /// Check the product identity for every m up to this bound.
        #[arg(long)]
        verify_mobius: Option<u64>,
    },
    /// Periodic points of x^2 + c over Q(sqrt(delta)).
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Also compute the preperiodic portrait.
        #[arg(long)]
        portrait: bool,
        #[arg(long, default_value_t = perdyn::number_field::DEFAULT_DEPTH_CAP)]
        depth_cap: usize,
        /// Use the second prime above 2 when 2 splits.
        #[arg(long)]
        other_prime: bool,
    },
    /// Randomized checks of the point-count bound and period laws.
    VerifyBounds {
        #[arg(long, value_delimiter = ',', default_values_t = [2u64])]
        p: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2])]
        f: Vec<usize>,
        #[arg(long, value_enum, default_value_t = SweepKind::Unicritical)]
        kind: SweepKind,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Oracle levels compared against the lifted count.
        #[arg(long, default_value_t = 3)]
        levels: u32,
        /// Also run x^2 + (-1 + sqrt(-3))/2 over the unramified quadratic
        /// extension of Q_2.
        #[arg(long)]
        nonexample: bool,
    },
    /// Exhaustive periodic census on O/pi^M for M = 1..levels.
    Oracle {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 3)]
        levels: u32,
        /// Write the functional graph at the last level as Graphviz.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}
