//! Experiment runner for the planar-jets library.

mod catalog;
mod config;
mod error;
mod experiments;
mod output;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::CliError;
use crate::experiments::RunOptions;

#[derive(Parser)]
#[command(name = "planar-jets", version, about = "Reproducible experiments on jets and Cauchy transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory (default: the config's output_dir, else out/<experiment>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sample JSON document replacing the config's set.
        #[arg(long)]
        set_spec: Option<PathBuf>,
        /// Also write grid functions and kernels in the binary layout.
        #[arg(long)]
        dump_binary: bool,
    },
    /// Print the catalog of experiments, sets and function symbols.
    List,
    /// Print the JSON schema for configs.
    Schema,
}

fn run(
    config_path: PathBuf,
    threads: Option<usize>,
    out: Option<PathBuf>,
    set_spec: Option<PathBuf>,
    dump_binary: bool,
) -> Result<PathBuf, CliError> {
    let bytes = std::fs::read(&config_path)
        .map_err(|e| CliError::Config(format!("reading {}: {e}", config_path.display())))?;
    let mut cfg = config::load(&config_path)?;
    if let Some(path) = set_spec {
        cfg.set = Some(config::SetConfig::File { path });
    }
    config::validate(&cfg)?;
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let artifacts = experiments::run(&cfg, RunOptions { dump_binary })?;
    let dir = out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.experiment));
    output::write_all(&dir, &cfg.experiment, &bytes, &artifacts)?;
    Ok(dir)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => print!("{}", catalog::listing()),
        Command::Schema => println!(
            "{}",
            serde_json::to_string_pretty(&schema::schema()).expect("schema serializes")
        ),
        Command::Run {
            config,
            threads,
            out,
            set_spec,
            dump_binary,
        } => match run(config, threads, out, set_spec, dump_binary) {
            Ok(dir) => eprintln!("wrote {}", dir.join(output::MANIFEST).display()),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
        },
    }
    ExitCode::SUCCESS
}
