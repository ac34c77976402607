use std::path::PathBuf;

use chipfire::engine::{Side, TieBreakPolicy, DEFAULT_MAX_STEPS};
use chipfire::solver::{MethodChoice, DEFAULT_COSET_BUDGET};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::family_params::FamilyParams;

#[derive(Debug, Parser)]
#[command(name = "chipfire", version, about = "Dollar game and chip-firing analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run greedy play (borrowing binge or greedy stabilization) and print the trace.
    Solve(SolveArgs),
    /// Compare the greedy move count with the exact minimum.
    Optimal(OptimalArgs),
    /// Generate an instance from one of the built-in families.
    Gen(GenArgs),
    /// Serve the HTTP API and the playground assets.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance JSON file, or `-` for standard input.
    pub instance: PathBuf,
    /// lowest, highest, extreme or random:<seed>
    #[arg(long, default_value = "lowest")]
    pub policy: TieBreakPolicy,
    /// dollar or chip; defaults to the instance's side.
    #[arg(long)]
    pub side: Option<Side>,
    /// Include every intermediate divisor.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
}

#[derive(Debug, Args)]
pub struct OptimalArgs {
    pub instance: PathBuf,
    /// auto, bfs or coset
    #[arg(long, default_value = "auto")]
    pub method: MethodChoice,
    /// BFS radius; defaults to the greedy move count.
    #[arg(long)]
    pub cap: Option<u64>,
    /// Coset search candidate budget.
    #[arg(long, default_value_t = DEFAULT_COSET_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub side: Option<Side>,
    /// Also print the shift analysis of the greedy firing vector.
    #[arg(long)]
    pub explain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// intro, star, hybrid or random
    pub family: String,
    #[command(flatten)]
    pub params: FamilyParams,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, env = "CHIPFIRE_PORT", default_value_t = 8080)]
    pub port: u16,
    /// Directory with the playground's static assets.
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
    #[arg(long, default_value_t = crate::sessions::DEFAULT_SESSION_CAP)]
    pub max_sessions: usize,
}
