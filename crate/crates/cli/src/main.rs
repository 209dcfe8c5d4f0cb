mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{Overrides, RunConfig};

/// Bad invocation or configuration; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(
    name = "kgfact",
    version,
    about = "Claim synthesis, verification and evidence retrieval over a knowledge graph"
)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a triple file (TSV, or N-Triples for `.nt`) and optionally write a snapshot.
    Ingest {
        input: PathBuf,
        /// Snapshot to write.
        snapshot: Option<PathBuf>,
    },
    /// Generate claims from seed sentences, split them and write JSONL files.
    Synth {
        /// Snapshot or triple file.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Seed sentences, one JSON object per line.
        #[arg(long)]
        seeds: Option<PathBuf>,
        /// Template catalog JSON replacing the bundled one.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Exclusion radius for entity substitution.
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Re-verify stored labels against the graph.
    Verify {
        #[arg(long)]
        graph: Option<PathBuf>,
        records: PathBuf,
        /// Print the verifier's account of every record.
        #[arg(long)]
        explain: bool,
    },
    /// Retrieve evidence paths for every claim.
    Retrieve {
        #[arg(long)]
        graph: Option<PathBuf>,
        records: PathBuf,
        #[arg(long, value_enum, default_value_t = Predictor::Oracle)]
        predictor: Predictor,
    },
    /// Print graph statistics.
    Stats {
        /// Snapshot or triple file.
        graph: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Predictor {
    Oracle,
    Lexical,
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("KGFACT_THREADS") {
        let n: usize = v.parse().map_err(|_| {
            UsageError(format!(
                "KGFACT_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    init_threads()?;
    let radius = match &cli.command {
        Command::Synth { radius, .. } => *radius,
        _ => None,
    };
    let overrides = Overrides {
        seed: cli.seed,
        out: cli.out.clone(),
        radius,
    };
    let mut config = RunConfig::load(cli.config.as_deref(), &overrides)?;
    match cli.command {
        Command::Ingest { input, snapshot } => commands::ingest(&input, snapshot.as_deref()),
        Command::Synth {
            graph,
            seeds,
            catalog,
            ..
        } => {
            config.graph = graph.or(config.graph);
            config.seeds = seeds.or(config.seeds);
            config.catalog = catalog.or(config.catalog);
            commands::synth(&config)
        }
        Command::Verify {
            graph,
            records,
            explain,
        } => {
            config.graph = graph.or(config.graph);
            commands::verify(&config, &records, explain)
        }
        Command::Retrieve {
            graph,
            records,
            predictor,
        } => {
            config.graph = graph.or(config.graph);
            commands::retrieve(&config, &records, predictor)
        }
        Command::Stats { graph } => {
            config.graph = graph.or(config.graph);
            commands::stats(&config)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
