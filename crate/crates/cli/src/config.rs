use std::path::{Path, PathBuf};

use entangle_core::hardware::{CouplingGraph, NoiseModel};
use entangle_core::randgen::Method;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Converge,
    Moments,
    Estimate,
    Emulate,
    Evolve,
    KakVerify,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Converge => "converge",
            Experiment::Moments => "moments",
            Experiment::Estimate => "estimate",
            Experiment::Emulate => "emulate",
            Experiment::Evolve => "evolve",
            Experiment::KakVerify => "kak-verify",
        }
    }
}

/// A named preset or explicit rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseSpec {
    Preset(String),
    Explicit { p1: f64, p2: f64, p_spam: f64 },
}

impl NoiseSpec {
    pub fn resolve(&self) -> Result<NoiseModel, CliError> {
        Ok(match self {
            NoiseSpec::Preset(name) => NoiseModel::preset(name)?,
            NoiseSpec::Explicit { p1, p2, p_spam } => NoiseModel::new(*p1, *p2, *p_spam)?,
        })
    }
}

/// The config file as written; every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: Option<Experiment>,
    pub n_qubits: Option<usize>,
    pub method: Option<Method>,
    pub layers: Option<usize>,
    pub ensemble: Option<usize>,
    pub settings: Option<usize>,
    pub shots: Option<u64>,
    pub topology: Option<String>,
    pub noise: Option<NoiseSpec>,
    pub steps: Option<usize>,
    pub count: Option<usize>,
    pub records_in: Option<PathBuf>,
    pub records_out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }
}

/// Command-line values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub experiment: Option<Experiment>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

pub const MAX_QUBITS: usize = 12;

/// A fully resolved experiment configuration; this is what the sidecar
/// echoes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_qubits: usize,
    pub method: Method,
    pub layers: usize,
    pub ensemble: usize,
    pub settings: usize,
    pub shots: u64,
    pub topology: String,
    pub noise: NoiseModel,
    pub steps: usize,
    pub count: usize,
    pub records_in: Option<PathBuf>,
    pub records_out: Option<PathBuf>,
    pub seed: u64,
    pub out: PathBuf,
}

fn positive<T: PartialOrd + Default + std::fmt::Display>(name: &str, v: T) -> Result<T, CliError> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {v}")))
    }
}

impl ExperimentConfig {
    pub fn resolve(file: FileConfig, over: Overrides) -> Result<Self, CliError> {
        let experiment = over
            .experiment
            .or(file.experiment)
            .ok_or_else(|| CliError::Config("no experiment given".into()))?;
        let n_qubits = match (experiment, file.n_qubits) {
            (_, Some(n)) => n,
            (Experiment::KakVerify, None) => 2,
            (Experiment::Estimate, None) if file.records_in.is_some() => 0,
            (_, None) => {
                return Err(CliError::Config(format!("{} needs n_qubits", experiment.name())));
            }
        };
        let topology = file.topology.unwrap_or_else(|| format!("all_to_all:{}", n_qubits.max(1)));
        let noise = file.noise.unwrap_or(NoiseSpec::Preset("ideal".into())).resolve()?;
        let config = Self {
            experiment,
            n_qubits,
            method: file.method.unwrap_or(Method::Direct),
            layers: positive("layers", file.layers.unwrap_or(20))?,
            ensemble: positive("ensemble", file.ensemble.unwrap_or(10))?,
            settings: positive("settings", file.settings.unwrap_or(20))?,
            shots: positive("shots", file.shots.unwrap_or(1000))?,
            topology,
            noise,
            steps: positive("steps", file.steps.unwrap_or(15))?,
            count: positive("count", file.count.unwrap_or(1000))?,
            records_in: file.records_in,
            records_out: file.records_out,
            seed: over.seed.or(file.seed).unwrap_or(0),
            out: over
                .out
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", experiment.name()))),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let n = self.n_qubits;
        match self.experiment {
            Experiment::KakVerify => {}
            Experiment::Estimate if self.records_in.is_some() => {
                if self.records_out.is_some() {
                    return bad("records_in and records_out are exclusive".into());
                }
            }
            Experiment::Moments if !(2..=62).contains(&n) => {
                return bad(format!("moments need 2 to 62 qubits, got {n}"));
            }
            Experiment::Moments => {}
            _ if !(2..=MAX_QUBITS).contains(&n) => {
                return bad(format!("n_qubits must be in 2..={MAX_QUBITS}, got {n}"));
            }
            _ => {}
        }
        if matches!(self.experiment, Experiment::Emulate | Experiment::Estimate)
            && (self.settings < 2 || self.shots < 2)
        {
            return bad("estimation needs at least 2 settings and 2 shots".into());
        }
        if matches!(self.experiment, Experiment::Converge) && self.ensemble < 2 {
            return bad("convergence statistics need an ensemble of at least 2".into());
        }
        if matches!(self.experiment, Experiment::Emulate | Experiment::Evolve) {
            let graph = CouplingGraph::preset(&self.topology)?;
            if graph.n_qubits() < n {
                return bad(format!("topology {} has fewer than {n} qubits", self.topology));
            }
        }
        Ok(())
    }
}
