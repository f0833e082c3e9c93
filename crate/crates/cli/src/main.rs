mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use chpeed::Algorithm;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chpeed", version, about = "Combined heat and power economic emission dispatch")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize a case and select the best compromise solutions.
    Solve {
        /// Case file, or the name of a shipped case (case1, case2).
        case: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare theta-DEA against NSGA-II over repeated runs.
    Compare {
        case: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Runs per algorithm; seeds derive from --seed.
        #[arg(long, default_value_t = 30)]
        runs: usize,
    },
    /// Check a case file and print a capacity summary without optimizing.
    Validate { case: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Run configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Population size.
    #[arg(long)]
    pop: Option<usize>,
    /// Maximum iterations.
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    algorithm: Option<Algorithm>,
    /// Output directory.
    #[arg(long, env = "CHPEED_OUT_DIR", default_value = "chpeed-out")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { case, run } => commands::solve(&case, &run),
        Command::Compare { case, run, runs } => commands::compare(&case, &run, runs),
        Command::Validate { case } => commands::validate(&case),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
