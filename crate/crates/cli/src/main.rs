//! `nagl`: generate instances, run solvers, sweep benchmarks, export models.

mod bench;
mod gen;
mod solve;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nagl_core::{ErrorClass, NaglError, Result};

#[derive(Parser)]
#[command(name = "nagl", version, about = "Neighborhood-aware graph labeling solvers")]
struct Cli {
    /// Log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file.
    Gen(gen::GenArgs),
    /// Solve an instance and emit a result record.
    Solve(solve::SolveArgs),
    /// Run a benchmark sweep and emit CSV.
    Bench(bench::BenchArgs),
    /// Export the local-configuration integer program in LP format.
    ExportLp {
        instance: PathBuf,
        /// Optional cardinality budget on label-1 vertices (binary alphabets).
        #[arg(long)]
        budget: Option<usize>,
        /// Cap on configurations per vertex.
        #[arg(long, default_value_t = 1 << 20)]
        cap: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a min-fill decomposition of the squared instance graph (PACE .td).
    ExportTd {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the instance graph as an edge list.
    ExportGraph {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &NaglError) -> u8 {
    match e.class() {
        ErrorClass::Input => 2,
        ErrorClass::Infeasible => 3,
        ErrorClass::Timeout => 4,
    }
}

fn run(command: Command) -> Result<()> {
    use nagl_core::decomposition::min_fill_decomposition;
    use nagl_core::graph::square_graph;
    use nagl_core::io::{graph_files::to_edge_list, lp::export_lp, pace::to_pace_string, InstanceFile};

    match command {
        Command::Gen(args) => gen::run(args),
        Command::Solve(args) => solve::run(args),
        Command::Bench(args) => bench::run(args),
        Command::ExportLp {
            instance,
            budget,
            cap,
            output,
        } => {
            let (_, loaded) = InstanceFile::open(&instance)?;
            let model = export_lp(&loaded.rewards, budget, cap)?;
            log::info!(
                "{} x-variables, {} y-variables, {} constraints",
                model.x_vars,
                model.y_vars,
                model.constraints
            );
            emit(output.as_deref(), &model.text)
        }
        Command::ExportTd { instance, output } => {
            let (_, loaded) = InstanceFile::open(&instance)?;
            let td = min_fill_decomposition(&square_graph(&loaded.graph));
            emit(output.as_deref(), &to_pace_string(&td))
        }
        Command::ExportGraph { instance, output } => {
            let (_, loaded) = InstanceFile::open(&instance)?;
            emit(output.as_deref(), &to_edge_list(&loaded.graph))
        }
    }
}

/// Writes to `path`, or stdout when absent.
pub(crate) fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| NaglError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
