use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub const CSV_SCHEMA_VERSION: u32 = 1;

/// One experiment's tabular output.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub experiment: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
    /// Extra values for the sidecar.
    pub summary: serde_json::Value,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    schema_version: u32,
    config: &'a ExperimentConfig,
    columns: &'a [&'a str],
    rows: usize,
    summary: &'a serde_json::Value,
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

impl Report {
    pub fn new(experiment: &'static str, columns: &'static [&'static str]) -> Self {
        Self { experiment, columns, rows: Vec::new(), summary: serde_json::Value::Null }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# entangle-bench {} schema v{}\n", self.experiment, CSV_SCHEMA_VERSION);
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }

    pub fn sidecar(&self, config: &ExperimentConfig) -> String {
        let sidecar = Sidecar {
            schema_version: CSV_SCHEMA_VERSION,
            config,
            columns: self.columns,
            rows: self.rows.len(),
            summary: &self.summary,
        };
        let mut s = serde_json::to_string_pretty(&sidecar).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, config: &ExperimentConfig) -> Result<(), CliError> {
        if let Some(dir) = config.out.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(&config.out, self.to_csv())?;
        std::fs::write(sidecar_path(&config.out), self.sidecar(config))?;
        Ok(())
    }
}

/// Shortest round-trip float text, so equal values print identically.
pub fn num(x: f64) -> String {
    format!("{x}")
}
