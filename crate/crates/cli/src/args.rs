use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "graphcode", version, about = "Graph families with constrained symmetric differences")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for artifacts and manifests.
    #[arg(long, global = true, env = "GRAPHCODE_OUT", default_value = "graphcode-out")]
    pub out: PathBuf,
    /// Print the summary as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Wall-clock limit; exceeding it exits with status 3.
    #[arg(long, global = true)]
    pub budget_ms: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Perfect 1-factorization of K_{p+1} (p prime) or of K_m by search.
    P1f(P1fArgs),
    /// Build a tree-code family generator.
    Treecode(TreecodeArgs),
    /// Check sampled member pairs of a generator.
    VerifyTreecode(VerifyTreecodeArgs),
    /// Blocker host graphs and their dual bounds.
    Blocker(BlockerArgs),
    /// Exact family sizes by exhaustive search.
    Oracle(OracleArgs),
    /// Torus grid hosts and connected-difference families.
    Grid(GridArgs),
    /// Binary codes.
    Codes(CodesArgs),
    /// Closed-form asymptotic rates.
    Rates(RatesArgs),
}

#[derive(Args, Debug)]
pub struct P1fArgs {
    /// Odd prime p; builds K_{p+1}.
    #[arg(long, conflicts_with = "order")]
    pub p: Option<usize>,
    /// Even order m <= 14, found by backtracking.
    #[arg(long)]
    pub order: Option<usize>,
    /// Also certify the restriction to p vertices.
    #[arg(long)]
    pub verify: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ColoringArg {
    Syndrome,
    Greedy,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum VariantArg {
    GvPartition,
    Hamming,
}

#[derive(Args, Debug)]
pub struct TreecodeArgs {
    #[arg(long, value_enum, default_value = "gv-partition")]
    pub variant: VariantArg,
    /// Number of vertices (odd); for the hamming variant use --k.
    #[arg(long)]
    pub n: Option<usize>,
    /// Hamming parameter: n = 2^k - 1.
    #[arg(long)]
    pub k: Option<usize>,
    /// Leaf count of the certified spanning trees.
    #[arg(long, short = 'l')]
    pub leaves: usize,
    #[arg(long, value_enum, default_value = "syndrome")]
    pub coloring: ColoringArg,
    /// Use this code file for the H layer instead of a greedy code.
    #[arg(long)]
    pub h_code_file: Option<PathBuf>,
    /// Also write every member, one graph line each.
    #[arg(long)]
    pub roster: bool,
    /// Verify this many sampled pairs right away.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyTreecodeArgs {
    #[arg(long)]
    pub r#gen: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum BlockerKind {
    Kcopy,
    Kdisjoint,
    Ktt,
}

#[derive(Args, Debug)]
pub struct BlockerArgs {
    #[arg(long, value_enum)]
    pub predicate: BlockerKind,
    #[arg(long)]
    pub n: usize,
    /// Pattern such as K3, C5, P4, S5, K2,3 or a graph line.
    #[arg(long, default_value = "K3")]
    pub pattern: String,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    #[arg(long, default_value_t = 20)]
    pub retries: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum PredicateKind {
    Connected,
    Contains,
    Kcopies,
    Kdisjoint,
    Leaves,
    Kst,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub predicate: PredicateKind,
    #[arg(long, default_value = "K3")]
    pub pattern: String,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub leaves: usize,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    #[command(subcommand)]
    pub action: GridAction,
}

#[derive(Subcommand, Debug)]
pub enum GridAction {
    /// Write the torus host graph.
    Build {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Search for a linear family of 2^dim members.
    Search {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 256)]
        restarts: u64,
    },
    /// Re-check a family file.
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        probe: usize,
    },
}

#[derive(Args, Debug)]
pub struct CodesArgs {
    #[command(subcommand)]
    pub kind: CodeKind,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum OrderArg {
    Lex,
    Random,
}

#[derive(Subcommand, Debug)]
pub enum CodeKind {
    /// Greedy code of length m and distance d.
    Gv {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "lex")]
        order: OrderArg,
        #[arg(long)]
        target: Option<usize>,
    },
    /// Hamming code of length 2^k - 1.
    Hamming {
        #[arg(long)]
        k: usize,
    },
    /// Even-weight distance-4 linear code of length m.
    Even {
        #[arg(long)]
        m: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ScenarioArg {
    Contains,
    Copies,
    Disjoint,
    Biclique,
}

#[derive(Args, Debug)]
pub struct RatesArgs {
    #[arg(long, default_value = "K3")]
    pub pattern: String,
    #[arg(long, value_enum, default_value = "contains")]
    pub scenario: ScenarioArg,
    #[arg(long, default_value_t = 0.0)]
    pub c: f64,
}
