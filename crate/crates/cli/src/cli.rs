use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "reap",
    version,
    about = "Decide, certify and order k-branching subtree coloring properties"
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Knowledge base file; created on first write.
    #[arg(long, global = true, default_value = "reap-kb.json")]
    pub kb: PathBuf,

    /// Node budget shared by all depths of one decision.
    #[arg(long, global = true, default_value_t = reap_core::engine::DEFAULT_NODE_BUDGET)]
    pub budget: u64,

    #[arg(long, global = true, default_value_t = reap_core::engine::DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,

    /// Search worker threads; 1 is fully deterministic.
    #[arg(long, global = true, default_value_t = 1)]
    pub parallelism: usize,

    /// Seed for randomly generated colorings.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Use the Laflamme result `LE((m,2),(k,3))` for `k >= 2m-1`.
    #[arg(long, global = true, value_enum, default_value_t = Toggle::On)]
    pub laflamme: Toggle,

    /// Do not load the bundled certificate fixtures.
    #[arg(long, global = true)]
    pub no_fixtures: bool,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether a stored coloring defeats (k, m).
    Verify {
        /// Coloring file `{i, h, j, leaves}`.
        #[arg(required_unless_present = "random")]
        file: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Check a seeded random coloring of T(h, i) with j colors instead.
        #[arg(long, num_args = 3, value_names = ["I", "H", "J"], conflicts_with = "file")]
        random: Option<Vec<usize>>,
    },
    /// Decide P(i, j, k, m).
    Decide {
        i: usize,
        j: usize,
        k: usize,
        m: usize,
        /// Also write the defeating coloring, if any, to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Queries on the order between pairs.
    Order {
        #[command(subcommand)]
        command: OrderCommand,
    },
    /// Negative polarized partition witnesses.
    Polarized {
        #[command(subcommand)]
        command: PolarizedCommand,
    },
    /// Bounded decisions for the open targets, with both readings.
    OpenProblems,
}

#[derive(Debug, Subcommand)]
pub enum OrderCommand {
    /// Is r(n,m) <= r(i,j) in every Boolean algebra?
    Query {
        n: usize,
        m: usize,
        i: usize,
        j: usize,
    },
    /// Cells (i, j) for 2 <= j <= i <= max_n.
    Table {
        max_n: usize,
        /// Skip the bounded searches for unsettled cells.
        #[arg(long)]
        no_search: bool,
    },
    /// DOT digraph of equivalence classes of pairs with n <= max_n.
    Hasse { max_n: usize },
}

#[derive(Debug, Subcommand)]
pub enum PolarizedCommand {
    /// Check a matrix file `{n, m, k, entries}` or the modular matrix.
    Check {
        #[arg(long, required_unless_present = "modular", conflicts_with = "modular")]
        file: Option<PathBuf>,
        /// Use the n x n matrix (x + y) mod n.
        #[arg(long)]
        modular: Option<usize>,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        q: usize,
    },
    /// Backtracking search for an n x m witness with k colors.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        q: usize,
    },
}
