use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polylap::commands::{self, EmbeddingArgs, Mode, SolveArgs};
use polylap::{exit, Format, Outcome};

/// Poly-Laplacian concave-convex problems on weighted graphs.
#[derive(Parser)]
#[command(name = "polylap", version)]
struct Cli {
    /// Report detail.
    #[arg(long, value_enum, global = true, default_value = "summary")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a graph file and print domain statistics.
    CheckGraph { graph: PathBuf },
    /// Evaluate the existence conditions for a configuration.
    CheckHypotheses {
        graph: PathBuf,
        config: PathBuf,
        /// Rational arithmetic (integer exponents only).
        #[arg(long)]
        exact: bool,
    },
    /// Compute a critical point and write it to a solution file.
    Solve {
        graph: PathBuf,
        config: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        starts: Option<usize>,
        /// Worker threads for independent starts.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Check a solution file against a configuration.
    Verify { graph: PathBuf, config: PathBuf, solution: PathBuf },
    /// Print an embedding constant of W_0^{m,s}.
    Embedding {
        graph: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: f64,
        /// Target Lebesgue exponent (brute force only; `inf` allowed).
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        brute_force: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::CheckGraph { graph } => commands::check_graph(&graph, format),
        Command::CheckHypotheses { graph, config, exact } => commands::check_hypotheses(&graph, &config, exact, format),
        Command::Solve { graph, config, mode, out, seed, starts, jobs } => {
            commands::solve(&SolveArgs { graph: &graph, config: &config, mode, out: &out, seed, starts, jobs, format })
        }
        Command::Verify { graph, config, solution } => commands::verify(&graph, &config, &solution, format),
        Command::Embedding { graph, m, s, r, brute_force, seed, starts, jobs } => {
            commands::embedding(&EmbeddingArgs { graph: &graph, m, s, r, brute_force, seed, starts, jobs, format })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::SUCCESS as u8 });
        }
    };
    let out = run(cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
