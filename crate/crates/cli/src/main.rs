//! `causekit`: command-line front end. Every command prints one JSON
//! verdict document on standard output. Exit codes: 0 positive verdict,
//! 1 negative verdict, 2 usage or model error, 3 budget exceeded.

mod commands;
mod document;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use causekit::distances::DEFAULT_BUDGET;

#[derive(Debug, Parser)]
#[command(
    name = "causekit",
    version,
    about = "Distance-based counterfactual causality for transition systems and games"
)]
pub struct Cli {
    /// Node-expansion budget for the exact searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Seed for `gen`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of witness paths reported by `ts-cause`.
    #[arg(long, global = true, default_value_t = 1)]
    pub witnesses: usize,
    /// Also print an aligned human-readable summary on standard error.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Is a state set a cause on an execution of a transition system?
    TsCause(TsCauseArgs),
    /// Is a vertex set a cause for a strategy losing a game?
    GameCause(GameCauseArgs),
    /// Explanations: extraction, checks and minimal distances.
    Explain(ExplainArgs),
    /// Winning regions and strategies of a game.
    Solve(SolveArgs),
    /// Distances between words or strategies.
    #[command(subcommand)]
    Distance(DistanceCommand),
    /// Structural equation models.
    #[command(subcommand)]
    Sem(SemCommand),
    /// Definitional brute-force versions of the cause checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Generate a random instance.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct TsCauseArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// JSON list of state ids: the execution π.
    #[arg(long)]
    pub path: PathBuf,
    /// Comma-separated state ids.
    #[arg(long)]
    pub cause: String,
    /// Comma-separated terminal state ids.
    #[arg(long)]
    pub effect: String,
    #[arg(long, default_value = "reach")]
    pub phi: String,
    /// pref, pref-ap, hamm, ghamm or lev.
    #[arg(long)]
    pub metric: String,
}

#[derive(Debug, Args)]
pub struct GameCauseArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub player: String,
    #[arg(long)]
    pub strategy: PathBuf,
    /// Comma-separated vertex ids.
    #[arg(long)]
    pub cause: String,
    /// pref-h, hamm-s or dstar.
    #[arg(long)]
    pub metric: String,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").multiple(false)))]
pub struct ExplainArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub strategy: PathBuf,
    #[arg(long)]
    pub player: Option<String>,
    /// Extract an explanation from this cause (default: no cause).
    #[arg(long, group = "mode")]
    pub cause: Option<String>,
    /// Check whether this vertex set is an explanation.
    #[arg(long, group = "mode")]
    pub check: Option<String>,
    /// Check whether this vertex set is a minimal explanation.
    #[arg(long, group = "mode")]
    pub check_minimal: Option<String>,
    /// Least distance of a winning strategy to σ.
    #[arg(long, group = "mode")]
    pub min_distance: bool,
    /// Winning strategy with least d* for games with acyclic `G^σ`.
    #[arg(long, group = "mode")]
    pub min_dstar_acyclic: bool,
    /// hamm-s or dstar, for the minimality modes.
    #[arg(long)]
    pub metric: Option<String>,
    /// Stop `--min-distance` at the first winning strategy within this distance.
    #[arg(long)]
    pub threshold: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum DistanceCommand {
    /// Distance between two words. Symbols are single characters, or
    /// comma-separated if a word contains a comma.
    Words {
        /// pref-ap, hamm, ghamm or lev.
        #[arg(long)]
        metric: String,
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// Distance between two strategies of the same player.
    Strategies {
        #[arg(long)]
        model: PathBuf,
        /// pref-h, hamm-s, dstar or dstrat.
        #[arg(long)]
        metric: String,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum SemCommand {
    /// List the but-for causes, or check one variable set.
    Butfor {
        #[arg(long)]
        sem: PathBuf,
        /// Comma-separated variable names.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Check that but-for causes are Hamming causes on the default path.
    Bridge {
        #[arg(long)]
        sem: PathBuf,
        #[arg(long)]
        vars: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    TsCause {
        #[command(flatten)]
        args: TsCauseArgs,
        /// Length bound on enumerated paths, needed for cyclic systems.
        #[arg(long)]
        bound: Option<usize>,
    },
    GameCause(GameCauseArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// layered-ts, acyclic-ts, acyclic-game, cyclic-game or boolean-sem.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub size: usize,
    #[arg(long, default_value_t = 3)]
    pub width: usize,
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    /// Write the instance here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli);
    match outcome {
        Ok(out) => {
            print!("{}", out.text);
            if cli.pretty {
                if let Some(doc) = &out.document {
                    eprint!("{}", document::human(doc));
                }
            }
            ExitCode::from(if out.positive { 0 } else { 1 })
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
