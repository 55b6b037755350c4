use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use entangle_core::convergence::convergence_study;
use entangle_core::hardware::{
    evolution_study, hardware_benchmark, Budgets, CouplingGraph, Device, PairSchedule,
};
use entangle_core::moments::{exact_mean_purity, exact_variance_purity, BipartitionDims};
use entangle_core::randgen::{
    build_generator_circuit, haar_unitary4, kak_decompose, phase_distance, two_qubit_circuit_unitary,
    GeneratorMethod,
};
use entangle_core::randmeas::{
    draw_settings, read_records, setting_values, simulate_randomized_measurements, write_records,
    PurityEstimate, ShotRecord,
};
use entangle_core::rng::{domain, SeedStreams};
use entangle_core::simcore::{apply_circuit, subsets, subsystem_purity, StateVector};
use serde_json::json;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;
use crate::report::{num, Report};

type Outcome = Result<Report, CliError>;

pub fn run_experiment(config: &ExperimentConfig) -> Outcome {
    match config.experiment {
        Experiment::Converge => converge(config),
        Experiment::Moments => moments(config),
        Experiment::Estimate => estimate(config),
        Experiment::Emulate => emulate(config),
        Experiment::Evolve => evolve(config),
        Experiment::KakVerify => kak_verify(config),
    }
}

fn streams(config: &ExperimentConfig) -> SeedStreams {
    SeedStreams::new(config.seed)
}

fn converge(c: &ExperimentConfig) -> Outcome {
    let points = convergence_study(c.n_qubits, c.method, c.layers, c.ensemble, streams(c))?;
    let mut report = Report::new("converge", &["method", "m", "N_e", "delta_mu", "delta_sigma2"]);
    for p in &points {
        report.push(vec![
            c.method.name().to_string(),
            p.layers.to_string(),
            c.ensemble.to_string(),
            num(p.delta_mu),
            num(p.delta_sigma2),
        ]);
    }
    Ok(report)
}

fn moments(c: &ExperimentConfig) -> Outcome {
    let n = c.n_qubits as u32;
    let mut report = Report::new("moments", &["n", "n_a", "mean_exact", "var_exact"]);
    let mut decimal = Vec::new();
    for n_a in 1..n {
        let dims = BipartitionDims::from_qubits(n, n_a)?;
        let (mean, var) = (exact_mean_purity(dims), exact_variance_purity(dims));
        decimal.push(json!({
            "n_a": n_a,
            "mean": entangle_core::moments::to_f64(&mean),
            "variance": entangle_core::moments::to_f64(&var),
        }));
        report.push(vec![n.to_string(), n_a.to_string(), mean.to_string(), var.to_string()]);
    }
    report.summary = json!({ "decimal": decimal });
    Ok(report)
}

/// Per-setting values averaged over every `n_a`-subset, then summarized
/// across settings.
fn subset_averaged(records: &[ShotRecord], n: usize, n_a: usize) -> Result<PurityEstimate, CliError> {
    let groups = subsets(n, n_a);
    let mut acc = vec![0.0; records.len()];
    for keep in &groups {
        for (a, v) in acc.iter_mut().zip(setting_values(records, keep)?) {
            *a += v;
        }
    }
    let values: Vec<f64> = acc.iter().map(|a| a / groups.len() as f64).collect();
    Ok(PurityEstimate::from_setting_values(&values)?)
}

fn estimate(c: &ExperimentConfig) -> Outcome {
    let (records, state) = match &c.records_in {
        Some(path) => (read_records(BufReader::new(File::open(path)?))?, None),
        None => {
            let s = streams(c);
            let method = GeneratorMethod::new(c.method, c.layers)?;
            let circuit =
                build_generator_circuit(c.n_qubits, method, &mut s.stream(domain::GENERATOR, 0))?;
            let state = apply_circuit(&StateVector::zero(c.n_qubits), &circuit)?;
            let settings = draw_settings(c.n_qubits, c.settings, &mut s.stream(domain::SETTINGS, 0))?;
            let records =
                simulate_randomized_measurements(&state, &settings, c.shots, &mut s.stream(domain::SHOTS, 0))?;
            (records, Some(state))
        }
    };
    let n = match records.first() {
        Some(r) => r.validate()?,
        None => return Err(entangle_core::Error::InsufficientData("no shot records".into()).into()),
    };
    if let Some(path) = &c.records_out {
        let mut w = BufWriter::new(File::create(path)?);
        write_records(&mut w, &records)?;
        w.flush()?;
    }
    let mut report = Report::new("estimate", &["n", "n_a", "purity_est", "std_err", "purity_exact"]);
    for n_a in 1..=n {
        let est = subset_averaged(&records, n, n_a)?;
        let exact = match &state {
            Some(s) => {
                let groups = subsets(n, n_a);
                let total = groups.iter().map(|k| subsystem_purity(s, k)).sum::<Result<f64, _>>()?;
                num(total / groups.len() as f64)
            }
            None => String::new(),
        };
        report.push(vec![n.to_string(), n_a.to_string(), num(est.estimate), num(est.std_error), exact]);
    }
    report.summary = json!({ "records": records.len() });
    Ok(report)
}

fn device(c: &ExperimentConfig) -> Result<Device, CliError> {
    Ok(Device {
        graph: CouplingGraph::preset(&c.topology)?,
        noise: c.noise,
        schedule: PairSchedule::preset(c.n_qubits)?,
    })
}

fn emulate(c: &ExperimentConfig) -> Outcome {
    let budgets = Budgets { ensemble: c.ensemble, settings: c.settings, shots: c.shots };
    let bench = hardware_benchmark(c.n_qubits, c.method, &device(c)?, budgets, streams(c))?;
    let mut report = Report::new("emulate", &["n", "n_a", "purity_est", "std_err", "purity_exact"]);
    for row in &bench.rows {
        report.push(vec![
            c.n_qubits.to_string(),
            row.n_a.to_string(),
            num(row.purity_est),
            num(row.std_err),
            num(row.purity_exact),
        ]);
    }
    report.summary = json!({
        "cnot_count": bench.cnot_count,
        "purity_ideal": bench.rows.iter().map(|r| r.purity_ideal).collect::<Vec<_>>(),
    });
    Ok(report)
}

fn evolve(c: &ExperimentConfig) -> Outcome {
    let study = evolution_study(c.n_qubits, c.method, &device(c)?, c.steps, c.ensemble, streams(c))?;
    let mut report = Report::new("evolve", &["step", "n_a", "purity"]);
    for row in &study.rows {
        report.push(vec![row.step.to_string(), row.n_a.to_string(), num(row.purity)]);
    }
    Ok(report)
}

fn kak_verify(c: &ExperimentConfig) -> Outcome {
    let mut rng = streams(c).stream(domain::KAK, 0);
    let mut report =
        Report::new("kak-verify", &["index", "cnot_count", "rotation_count", "reconstruction_error"]);
    let mut worst = 0.0f64;
    for i in 0..c.count {
        let u = haar_unitary4(&mut rng);
        let dec = kak_decompose(&u)?;
        let err = phase_distance(&u, &two_qubit_circuit_unitary(&dec.circuit)?);
        worst = worst.max(err);
        report.push(vec![
            i.to_string(),
            dec.cnot_count().to_string(),
            dec.rotation_count().to_string(),
            num(err),
        ]);
    }
    report.summary = json!({ "max_reconstruction_error": worst });
    Ok(report)
}
