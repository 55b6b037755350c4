//! Batch experiment runner for `entangle-core`.
//!
//! A run reads one JSON config, applies command-line overrides, executes
//! the experiment and writes a CSV report plus a `<out>.json` sidecar that
//! echoes the resolved config.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

pub use config::{Experiment, ExperimentConfig, FileConfig, NoiseSpec, Overrides};
pub use error::{CliError, ErrorRecord};
pub use experiments::run_experiment;
pub use report::{sidecar_path, Report, CSV_SCHEMA_VERSION};

/// Resolve, run and write both output files.
pub fn run(config: &ExperimentConfig) -> Result<Report, CliError> {
    let report = run_experiment(config)?;
    report.write(config)?;
    Ok(report)
}
