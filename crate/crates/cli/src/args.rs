use clap::{Args, Parser, Subcommand, ValueEnum};
use impartial::blocking::DEFAULT_MAX_RETRIES;

use crate::descriptor::MechanismArgs;
use crate::error::EXIT_CODES_HELP;

/// Impartial rank aggregation: evaluate mechanisms, verify axioms, search
/// multigraphs, export fixtures and emit encodings. JSON goes to standard
/// output, diagnostics to standard error.
#[derive(Debug, Parser)]
#[command(name = "impartial", version, after_help = EXIT_CODES_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank a profile with a mechanism.
    #[command(after_help = EXIT_CODES_HELP)]
    Rank(RankArgs),
    /// Check axioms for a mechanism and print the reports.
    #[command(after_help = EXIT_CODES_HELP)]
    Verify(VerifyArgs),
    /// Search for a random blocking multigraph with rho_i = i + 1 mod n.
    #[command(after_help = EXIT_CODES_HELP)]
    GraphSearch(GraphSearchArgs),
    /// Print a built-in fixture as JSON.
    #[command(after_help = EXIT_CODES_HELP)]
    Export(ExportArgs),
    /// Refute impartiality plus full rank for n = 2, 3, or write the n = 4
    /// weak-unanimity encoding.
    #[command(after_help = EXIT_CODES_HELP)]
    Impossibility(ImpossibilityArgs),
    /// Walk the unanimity chain and report the first violated check.
    #[command(after_help = EXIT_CODES_HELP)]
    AuditUnanimity(AuditArgs),
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub mechanism: MechanismArgs,
    /// Profile JSON: {"n": 4, "rankings": [[1,2,3,0], ...]}.
    #[arg(long)]
    pub profile: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Exhaustive, using the mechanism's structure where possible.
    Exhaustive,
    /// Brute force over every profile.
    Full,
    /// Exhaustive over the decisive triples of weak-unanimity.
    ExhaustiveTriples,
    /// Random profiles; never reports `holds`.
    Sampled,
}

impl ModeArg {
    pub fn name(self) -> &'static str {
        match self {
            ModeArg::Exhaustive => "exhaustive",
            ModeArg::Full => "full",
            ModeArg::ExhaustiveTriples => "exhaustive-triples",
            ModeArg::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub mechanism: MechanismArgs,
    /// Axioms to check: impartiality, monotonicity, individual-full-rank
    /// (or ifr), weak-unanimity, unanimity, or all.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub axiom: Vec<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    /// Trials for sampled mode [default: 10000].
    #[arg(long)]
    pub trials: Option<u64>,
    /// Seed for sampled mode.
    #[arg(long, default_value_t = 0)]
    pub sample_seed: u64,
    /// Worker threads for exhaustive sweeps.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct GraphSearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
    pub max_retries: u32,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// blocking-n6, g4, shifted-diagonal, multigraph-N (N = 5..10) or
    /// cutting-N (N = 5..20).
    #[arg(long)]
    pub fixture: String,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct ImpossibilityArgs {
    /// 2 or 3 for the refutation.
    #[arg(long)]
    pub n: Option<usize>,
    /// Write the n = 4 impartiality plus weak-unanimity encoding as DIMACS.
    #[arg(long)]
    pub encode_n4: bool,
    /// JSON array of n = 4 profiles; restricts the permutation clauses to
    /// them.
    #[arg(long, requires = "encode_n4")]
    pub profiles: Option<String>,
    /// DIMACS output file.
    #[arg(long, requires = "encode_n4")]
    pub out: Option<String>,
    /// Variable map output file [default: <out>.vars.json].
    #[arg(long, requires = "encode_n4")]
    pub map: Option<String>,
    /// Solve a subset instance with the built-in DPLL and check the decoded
    /// mechanism.
    #[arg(long, requires = "profiles")]
    pub solve: bool,
    /// Decision budget for --solve.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub mechanism: MechanismArgs,
}
