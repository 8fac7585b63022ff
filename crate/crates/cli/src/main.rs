//! `byzvec` command-line front end.
//!
//! Exit codes: 0 when everything requested holds or passes, 1 when a
//! condition fails or a run does not verify, 2 on usage or parse errors,
//! 3 when a work budget is exhausted.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "byzvec", version, about = "Iterative Byzantine vector consensus toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check conditions NC and/or SC on a graph.
    Check {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = Which::Both)]
        which: Which,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Check condition NC.
    CheckNc {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Check condition SC.
    CheckSc {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Run Byz-Iter on a scenario file (or every `*.scn` file of a directory).
    Simulate(SimulateArgs),
    /// Re-check a trace against its scenario.
    Verify {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        /// Also write the reports here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tverberg partition and point of a multiset.
    Tverberg {
        #[arg(long)]
        f: usize,
        /// File with one point per line, e.g. `(1/2, 3)`.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Points given inline.
        #[arg(value_name = "POINT")]
        inline: Vec<String>,
    },
    /// Population and degree bounds, beta, r and t_end.
    Bounds {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        mu: String,
        #[arg(long = "upper", visible_alias = "U")]
        upper: String,
        #[arg(long)]
        epsilon: String,
    },
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    f: usize,
}

#[derive(Args)]
struct CheckArgs {
    /// Maximum number of partitions (or reduced graphs) to examine.
    #[arg(long, default_value_t = byzvec::conditions::DEFAULT_BUDGET)]
    budget: u64,
    /// Decide SC through reduced graphs instead of partitions.
    #[arg(long)]
    via_reduced: bool,
    /// Also write the reports here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, required_unless_present = "sweep", conflicts_with = "sweep")]
    scenario: Option<PathBuf>,
    /// Line-delimited JSON trace output.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// CSV of `t,coordinate,spread,approx` rows.
    #[arg(long)]
    spread_table: Option<PathBuf>,
    /// Run exactly t_end rounds, whatever the scenario's termination says.
    #[arg(long)]
    strict_paper: bool,
    /// Largest t_end a strict-paper run will execute.
    #[arg(long, default_value_t = byzvec::protocol::DEFAULT_MAX_ROUNDS)]
    max_paper_rounds: u64,
    /// Run every `*.scn` file in this directory in parallel.
    #[arg(long)]
    sweep: Option<PathBuf>,
    /// Where sweep outputs go (defaults to the sweep directory).
    #[arg(long, requires = "sweep")]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Nc,
    Sc,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { graph, which, check } => commands::check(&graph, which, &check),
        Command::CheckNc { graph, check } => commands::check(&graph, Which::Nc, &check),
        Command::CheckSc { graph, check } => commands::check(&graph, Which::Sc, &check),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Verify {
            trace,
            scenario,
            out,
        } => commands::verify(&trace, &scenario, out.as_deref()),
        Command::Tverberg { f, points, inline } => commands::tverberg(f, points.as_deref(), &inline),
        Command::Bounds {
            graph,
            mu,
            upper,
            epsilon,
        } => commands::bounds(&graph, &mu, &upper, &epsilon),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
