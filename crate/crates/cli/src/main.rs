//! `strata`: JSON front-end for strata-core.
//!
//! Exit codes: 0 success, 2 validation error, 3 not realizable or failed
//! precondition, 4 resource limit.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use strata_core::Error;

use output::{ErrorBody, ErrorDocument, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "strata", version, about = "Exact dimension bookkeeping for instanton moduli spaces")]
struct Cli {
    /// Emit compact single-line JSON.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected dimension of the invariant moduli space of a bundle type.
    DimOrbifold(DimOrbifoldArgs),
    /// Dimension of the Z_p-invariant moduli space on S^4.
    DimS4(S4Args),
    /// Congruence witnesses and a shortest chain for a triple on S^4.
    AustinCheck(AustinArgs),
    /// Every bubble tree of total weight k.
    EnumerateTrees(EnumerateTreesArgs),
    /// Orbifold bubble trees of a bundle type, with stratum dimensions.
    EnumerateOTrees(EnumerateOTreesArgs),
    /// Dimension balance for a tree with one bubble.
    GluingCheck(GluingArgs),
    /// Random rank two matrices on CP^2: jump lines, pairs and round trip.
    Cp2Demo(Cp2Args),
    /// The exact cotangent sum for (a, b, m).
    CotSum(CotSumArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::DimOrbifold(_) => "dim-orbifold",
            Command::DimS4(_) => "dim-s4",
            Command::AustinCheck(_) => "austin-check",
            Command::EnumerateTrees(_) => "enumerate-trees",
            Command::EnumerateOTrees(_) => "enumerate-o-trees",
            Command::GluingCheck(_) => "gluing-check",
            Command::Cp2Demo(_) => "cp2-demo",
            Command::CotSum(_) => "cot-sum",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Su2,
    So3,
}

#[derive(Args)]
struct SignatureArgs {
    /// Order of the global quotient group.
    #[arg(long, default_value_t = 1)]
    alpha: u64,
    #[arg(long, default_value_t = 0)]
    b2_plus: u64,
    #[arg(long, value_enum, default_value_t = GroupArg::Su2)]
    group: GroupArg,
    /// Singular points as `a:b`, comma separated.
    #[arg(long, value_delimiter = ',')]
    sing: Vec<String>,
}

#[derive(Args)]
struct BundleArgs {
    /// c_2 for SU2, p_1 for SO3.
    #[arg(long, allow_hyphen_values = true)]
    charge: Option<i64>,
    /// Isotropy weights m_i mod a_i, comma separated.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<u64>,
}

#[derive(Args)]
struct DimOrbifoldArgs {
    #[command(flatten)]
    signature: SignatureArgs,
    #[command(flatten)]
    bundle: BundleArgs,
    /// JSON document `{"signature": ..., "bundle": ...}`; replaces the flags.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct S4Args {
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    q: i64,
    #[arg(long)]
    k: u64,
    #[arg(long, allow_hyphen_values = true)]
    m: i64,
    #[arg(long, allow_hyphen_values = true)]
    m_prime: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum TerminalArg {
    MatchesMPrime,
    Literal,
}

#[derive(Args)]
struct AustinArgs {
    #[command(flatten)]
    triple: S4Args,
    #[arg(long, value_enum, default_value_t = TerminalArg::MatchesMPrime)]
    terminal: TerminalArg,
}

#[derive(Args)]
struct EnumerateTreesArgs {
    #[arg(long)]
    k: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_trees: usize,
}

#[derive(Args)]
struct EnumerateOTreesArgs {
    #[command(flatten)]
    signature: SignatureArgs,
    #[command(flatten)]
    bundle: BundleArgs,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    depth_cap: usize,
    #[arg(long, default_value_t = 2)]
    weight_cap: u64,
    #[arg(long, default_value_t = 100_000)]
    max_trees: usize,
}

#[derive(Args)]
struct GluingArgs {
    #[command(flatten)]
    signature: SignatureArgs,
    /// Background bundle type.
    #[command(flatten)]
    bundle: BundleArgs,
    /// A free bubble of this weight at a smooth point.
    #[arg(long, conflicts_with = "singular")]
    free: Option<u64>,
    /// A singular bubble `i:k:m_in:m_out` at singular point `i`.
    #[arg(long)]
    singular: Option<String>,
    /// JSON tree document; replaces the flags.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct Cp2Args {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    samples: usize,
    /// Order of the cyclic action used for the fixed-locus test.
    #[arg(long, default_value_t = 2)]
    a: u64,
}

#[derive(Args)]
struct CotSumArgs {
    #[arg(long)]
    a: i64,
    #[arg(long, allow_hyphen_values = true)]
    b: i64,
    #[arg(long, allow_hyphen_values = true)]
    m: i64,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::InvalidAlpha(_) | Error::DegeneratePair => 2,
        Error::NotRealizable(_) | Error::PreconditionFailed(_) => 3,
        Error::ResourceLimit(_) => 4,
    }
}

/// Writes one document; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let render = |v: &serde_json::Value| {
        if cli.compact {
            serde_json::to_string(v)
        } else {
            serde_json::to_string_pretty(v)
        }
        .expect("JSON values serialize")
    };
    match commands::run(&cli.command) {
        Ok(body) => {
            emit(&render(&body));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("strata {name}: {e}");
            let doc = ErrorDocument {
                schema_version: SCHEMA_VERSION,
                command: name,
                error: ErrorBody::from_core(&e),
            };
            emit(&render(&serde_json::to_value(doc).expect("error document serializes")));
            ExitCode::from(exit_code(&e))
        }
    }
}
