mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "affsimp", version, about = "Exact enumeration of affine simplexes, semi-simplexes and minimal reactions")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate affine simplexes of a point set, or circuits of a vector set.
    Simplexes(SimplexesArgs),
    /// Build an extremal configuration and check it against its closed form.
    Construct(ConstructArgs),
    /// Exhaustively minimize the YBLM sum of the semi-simplex family.
    Search(SearchArgs),
    /// List the minimal balanced reactions among a set of species.
    React(ReactArgs),
    /// Run a built-in verification suite.
    Verify(VerifyArgs),
    /// Semi-simplex family of a hypergraph, with its antichain and YBLM checks.
    Sperner(SpernerArgs),
}

#[derive(Args, Debug)]
pub struct SimplexesArgs {
    /// Point set (JSON or CSV).
    #[arg(long, conflicts_with = "vectors", required_unless_present = "vectors")]
    pub points: Option<PathBuf>,
    /// Vector configuration (JSON or CSV).
    #[arg(long)]
    pub vectors: Option<PathBuf>,
    /// Also project the vectors to an affine hyperplane and enumerate there.
    #[arg(long, requires = "vectors")]
    pub project: bool,
    /// Report only counts by size.
    #[arg(long)]
    pub counts_only: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// inplane-generic, cone, parallel-pairs, two-lines or two-disjoint-edges.
    pub id: String,
    /// `d n` for inplane-generic and cone, `n` for parallel-pairs and
    /// two-lines, `k n` for two-disjoint-edges.
    #[arg(required = true)]
    pub params: Vec<usize>,
    /// Write the configuration here and the check to `<out>.check.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    pub n: usize,
    pub k: usize,
    /// Restrict to (k-1)-linear hypergraphs.
    #[arg(long, conflicts_with = "free", required_unless_present = "free")]
    pub linear: bool,
    /// Search all hypergraphs.
    #[arg(long)]
    pub free: bool,
    /// Maximum number of candidates to examine.
    #[arg(long, env = "AFFSIMP_BUDGET")]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReactArgs {
    /// Species file: one formula per line, or JSON.
    pub file: PathBuf,
    /// Comma-separated atom order, e.g. `C,H,O`; inferred when absent.
    #[arg(long, value_delimiter = ',')]
    pub universe: Option<Vec<String>>,
    /// Also print reaction counts by size against `C(n, rank + 1)`.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// constructions, sperner, s-small, oracle, projection, triangles,
    /// stoichiometry or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, env = "AFFSIMP_BUDGET")]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SpernerArgs {
    /// Hypergraph JSON `{"n": .., "edges": [[..], ..]}`.
    #[arg(long)]
    pub hypergraph: PathBuf,
    #[arg(long)]
    pub k: usize,
    /// List the family members too.
    #[arg(long)]
    pub list: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Simplexes(a) => commands::simplexes(a, cli.format),
        Command::Construct(a) => commands::construct(a, cli.format),
        Command::Search(a) => commands::search(a, cli.format),
        Command::React(a) => commands::react(a, cli.format),
        Command::Verify(a) => commands::verify(a, cli.format),
        Command::Sperner(a) => commands::sperner(a, cli.format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.kind.code())
        }
    }
}
