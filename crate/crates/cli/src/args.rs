use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use consensus_targets::DEFAULT_BUDGET;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "ctargets", version, about = "Optimal and near-optimal target sets for random-walk spreading")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact optimum of cardinality M by exhaustive search.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: usize,
    },
    /// Greedy selection plus the anchored guarantee check.
    Greedy {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: usize,
        /// Start greedy from this node instead of the empty set.
        #[arg(long)]
        anchor: Option<u64>,
    },
    /// Two-Opt maximal matching and the cover it induces.
    Cover {
        #[command(flatten)]
        common: Common,
        /// Edge-order permutation seed; 0 scans edges in canonical order.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The ranked family of optimal and near-optimal sets.
    Family {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rank: RankArgs,
        /// Maximum number of sets listed.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Greedoid construction over the ranked family, with verification.
    Greedoid {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rank: RankArgs,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Local search over the greedoid towards cardinality M.
    Search {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rank: RankArgs,
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long)]
        m: usize,
        /// Feasible start set (comma separated); defaults to the empty set.
        #[arg(long, value_delimiter = ',')]
        start: Option<Vec<u64>>,
        /// Add the per-base stepwise extension table.
        #[arg(long)]
        table: bool,
    },
    /// Hitting times and objective of one target set.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        /// Monte Carlo walks per start node; 0 skips the simulation.
        #[arg(long, default_value_t = 0)]
        walks: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Edge-list file, `-` for stdin.
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Output::Table)]
    pub output: Output,
    /// Cap on the number of sets an exhaustive step may visit.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    /// Rank threshold in (0, 1].
    #[arg(long)]
    pub c: f64,
    /// Cover size: `auto` for the Two-Opt cover, or a number together with `--cover`.
    #[arg(long, default_value = "auto", value_parser = parse_k)]
    pub k: KChoice,
    #[arg(long, value_delimiter = ',')]
    pub cover: Option<Vec<u64>>,
    /// Edge-order seed for the Two-Opt cover.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[arg(long = "case", value_enum, default_value_t = CaseChoice::Auto)]
    pub case: CaseChoice,
    /// Base set for Case I (comma separated); defaults to the first one.
    #[arg(long, value_delimiter = ',')]
    pub base: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KChoice {
    Auto,
    Fixed(usize),
}

fn parse_k(s: &str) -> Result<KChoice, String> {
    if s == "auto" {
        return Ok(KChoice::Auto);
    }
    s.parse::<usize>().map(KChoice::Fixed).map_err(|_| format!("expected `auto` or a cover size, got `{s}`"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseChoice {
    Case1,
    Case2,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Json,
    Csv,
    Table,
}

/// Everything needed to rerun a command, embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub graph_path: String,
    pub command: String,
    pub m: Option<usize>,
    pub c: Option<f64>,
    pub k: Option<KChoice>,
    pub cover: Option<Vec<u64>>,
    pub case: Option<CaseChoice>,
    pub base: Option<Vec<u64>>,
    pub start: Option<Vec<u64>>,
    pub seed: u64,
    pub budget: u64,
    pub output: Output,
}

impl RunConfig {
    pub fn new(command: &str, common: &Common) -> Self {
        RunConfig {
            graph_path: common.graph.display().to_string(),
            command: command.to_string(),
            m: None,
            c: None,
            k: None,
            cover: None,
            case: None,
            base: None,
            start: None,
            seed: 0,
            budget: common.budget,
            output: common.output,
        }
    }

    pub fn with_rank(mut self, rank: &RankArgs) -> Self {
        self.c = Some(rank.c);
        self.k = Some(rank.k);
        self.cover = rank.cover.clone();
        self.seed = rank.seed;
        self
    }

    pub fn with_build(mut self, build: &BuildArgs) -> Self {
        self.case = Some(build.case);
        self.base = build.base.clone();
        self
    }
}
