use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ringlab", version, about = "Exact finite-ring engine: n-UU classes, decompositions and theorem suites")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalArgs {
    /// Inclusive exponent range, e.g. 1..24
    #[arg(long, global = true, value_name = "A..B")]
    pub n_range: Option<String>,
    /// Largest ring the engine may build (default 65536, or RINGLAB_MAX_SIZE)
    #[arg(long, global = true, value_name = "N")]
    pub max_size: Option<usize>,
    /// Worker threads (default: available cores)
    #[arg(long, global = true, value_name = "T")]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Ring expressions, one per line, `#` comments
    #[arg(long, global = true, value_name = "FILE")]
    pub corpus: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ListKind {
    Units,
    Nilpotents,
    Idempotents,
    Radical,
    Center,
    Npotents,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecomposeKind {
    Nilclean,
    #[value(name = "n-nilclean")]
    NNilclean,
    Piregular,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants and class membership of one ring
    Classify {
        /// Ring expression, e.g. "M(2,Z(2))"
        expr: String,
    },
    /// Recompute the five-ring example table and compare it cell by cell
    Table {
        /// Flip one computed cell, given as ROW:COLUMN (harness self-test)
        #[arg(long, hide = true, value_name = "ROW:COL")]
        inject_fault: Option<String>,
    },
    /// Run theorem suites over the corpus
    Verify {
        /// Suite id or "all"
        suite: String,
    },
    /// Print element codes of a structural set
    List {
        #[arg(value_enum)]
        kind: ListKind,
        expr: String,
        /// Exponent for npotents
        #[arg(long, default_value_t = 2)]
        n: u64,
    },
    /// Search for a decomposition of one element
    Decompose {
        expr: String,
        /// Element code, "#k" or "k"
        element: String,
        #[arg(value_enum)]
        kind: DecomposeKind,
        /// Exponent for n-nilclean
        #[arg(long, default_value_t = 2)]
        n: u64,
    },
    /// Tabulate uu-exponents of group rings RG against R and G
    Explore {
        /// Semicolon-separated base rings (default: a small catalog)
        #[arg(long, value_delimiter = ';', value_name = "EXPR;EXPR")]
        bases: Option<Vec<String>>,
        /// Semicolon-separated groups (default: a small catalog)
        #[arg(long, value_delimiter = ';', value_name = "GROUP;GROUP")]
        groups: Option<Vec<String>>,
        /// Keep only p-groups
        #[arg(long)]
        p_groups_only: bool,
        /// Skip group rings larger than this
        #[arg(long, default_value_t = ringlab_core::predicates::explore::DEFAULT_EXPLORE_LIMIT)]
        ring_limit: usize,
    },
}
