mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Parser)]
#[command(name = "sl2uea", version, about = "Exact computations in U(sl2)^r, its central quotients and p-adic completions")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// PBW normal form of an expression, or its image in a central quotient.
    Nf(NfArgs),
    /// Filtration dimensions of U, of its central quotients, and graded Hilbert numbers.
    Dims(DimsArgs),
    /// Multiplicity of W_k in U/U·δ, cross-checked by a second method.
    Mult(MultArgs),
    /// Multiplicities against the upper bound polynomial.
    Bounds(BoundsArgs),
    /// Microlocalisation b ↦ exp(p·x) − 1 of a series in b1, b2, ….
    Micro(MicroArgs),
    /// Norms ‖·‖_r with r = p^(−1/pⁿ), and the convergence-rate sequence.
    Norms(NormsArgs),
    /// Minimal nonvanishing precision of δ over a grid of central characters.
    Generic(GenericArgs),
    /// Lazard sum and bracket approximations in the congruence subgroup of SL2(Z_p).
    Lazard(LazardArgs),
}

#[derive(Args)]
pub struct NfArgs {
    /// Expression, e.g. "f1*e1" or "Delta1 - 3/2".
    pub expr: String,
    /// Number of tensor factors (default: highest factor mentioned).
    #[arg(long)]
    pub r: Option<usize>,
    /// Reduce in U_λ: "weight:k1,k2,…" or rationals "a/b,c,…".
    #[arg(long)]
    pub lambda: Option<String>,
    /// With --lambda, reduce modulo p^precision.
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long)]
    pub precision: Option<u32>,
}

#[derive(Args)]
pub struct DimsArgs {
    /// Multidegree "d1,d2,…".
    #[arg(long)]
    pub d: Option<String>,
    /// Dimensions in the central quotient U_λ instead of U.
    #[arg(long)]
    pub quot: bool,
    /// Central character (recorded; the dimension does not depend on it).
    #[arg(long)]
    pub lambda: Option<String>,
    /// Graded Hilbert numbers of the quotient for degrees 0..=N.
    #[arg(long)]
    pub hilbert: Option<u32>,
}

#[derive(Args)]
pub struct WeightArgs {
    /// A weight "k1,k2,…"; may be repeated.
    #[arg(long)]
    pub k: Vec<String>,
    /// Parallel weights (j,…,j) for j in an inclusive range "a..b".
    #[arg(long)]
    pub k_parallel: Option<String>,
    /// Number of tensor factors (default: from --k or δ).
    #[arg(long)]
    pub r: Option<usize>,
}

#[derive(Args)]
pub struct MultArgs {
    #[arg(long)]
    pub delta: String,
    #[command(flatten)]
    pub weights: WeightArgs,
}

#[derive(Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub delta: String,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Filtration degree α "a1,a2,…" (default: multidegree of δ).
    #[arg(long)]
    pub alpha: Option<String>,
}

#[derive(Args)]
pub struct PadicArgs {
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    /// Precision N: values are known mod p^N.
    #[arg(long, default_value_t = 4)]
    pub precision: u32,
    /// Degree cutoff D.
    #[arg(long, default_value_t = 6)]
    pub degree: u32,
}

#[derive(Args)]
pub struct MicroArgs {
    /// Series in b1, b2, …; b(3i+1), b(3i+2), b(3i+3) map to f, h, e of factor i+1.
    #[arg(long)]
    pub series: String,
    #[arg(long)]
    pub r: Option<usize>,
    #[command(flatten)]
    pub padic: PadicArgs,
}

#[derive(Args)]
pub struct NormsArgs {
    /// Series in b1, b2, ….
    #[arg(long, conflicts_with = "log_var")]
    pub series: Option<String>,
    /// Use log(1 + b_i) as the series.
    #[arg(long)]
    pub log_var: Option<usize>,
    /// Values of n, "1..3" or "1,2".
    #[arg(long, default_value = "1..3")]
    pub n: String,
    /// Instead, print the sequence log_p(|p^(nk)/k!|·p^((n−1)k)) for k ≤ K.
    #[arg(long)]
    pub decay: Option<u64>,
    #[command(flatten)]
    pub padic: PadicArgs,
}

#[derive(Args)]
pub struct GenericArgs {
    #[arg(long)]
    pub delta: String,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    /// Highest precision m probed.
    #[arg(long, default_value_t = 4)]
    pub m: u32,
    /// The grid is (Z/p^g)^r.
    #[arg(long, default_value_t = 4)]
    pub grid_exponent: u32,
}

#[derive(Args)]
pub struct LazardArgs {
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    #[arg(long, default_value_t = 12)]
    pub precision: u32,
    /// First matrix exp(p·x) for x one of e, f, h; prefix "-" for the inverse.
    #[arg(long, default_value = "e", allow_hyphen_values = true)]
    pub g: String,
    /// Second matrix, same syntax.
    #[arg(long, default_value = "f", allow_hyphen_values = true)]
    pub h: String,
    /// Largest i (default: the largest with precision left).
    #[arg(long)]
    pub i_max: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Nf(a) => commands::nf(a),
        Command::Dims(a) => commands::dims(a),
        Command::Mult(a) => commands::mult(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Micro(a) => commands::micro(a),
        Command::Norms(a) => commands::norms(a),
        Command::Generic(a) => commands::generic(a),
        Command::Lazard(a) => commands::lazard(a),
    };
    let result = result.and_then(|table| {
        table
            .emit(cli.output.as_deref(), cli.format)
            .map_err(commands::CliError::Io)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
