use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use entangle_bench::{run, CliError, Experiment, ExperimentConfig, FileConfig, Overrides};

/// Seeded random-state generation, purity estimation and hardware emulation.
#[derive(Debug, Parser)]
#[command(name = "entangle-bench", version)]
struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: Experiment,

    /// JSON config file.
    #[arg(long)]
    config: PathBuf,

    /// Master seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,

    /// CSV output path (overrides the config); the sidecar is `<out>.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(args: Args) -> Result<(), CliError> {
    let file = FileConfig::load(&args.config)?;
    let overrides = Overrides { experiment: Some(args.experiment), seed: args.seed, out: args.out };
    let config = ExperimentConfig::resolve(file, overrides)?;
    run(&config)?;
    Ok(())
}

fn main() -> ExitCode {
    match execute(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = e.record();
            eprintln!("{}", serde_json::to_string(&record).expect("error record serializes"));
            ExitCode::from(record.exit_code as u8)
        }
    }
}
