//! Ensemble convergence of the layered generators toward Haar purity
//! statistics.
//!
//! Each ensemble member is one generator run with `m_max` layers; the state
//! after the first `m` layers is the member's depth-`m` sample, so every
//! depth shares the same random draws. The purity of `n_a` kept qubits is
//! taken on the leading subsystem `{0, …, n_a − 1}`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::moments::{relative_errors, EnsembleReport};
use crate::randgen::{build_generator_layers, GeneratorMethod, Method};
use crate::rng::{domain, SeedStreams};
use crate::simcore::{subsystem_purity, StateVector};
use crate::{stats, Error, Result};

/// `purities[m − 1][n_a − 1]` for one member.
pub type DepthPurities = Vec<Vec<f64>>;

fn leading_purities(state: &StateVector) -> Result<Vec<f64>> {
    let n = state.n_qubits();
    (1..n).map(|n_a| subsystem_purity(state, &(0..n_a).collect::<Vec<_>>())).collect()
}

/// Purities after every layer prefix of a single generator run.
pub fn member_depth_purities<R: Rng + ?Sized>(
    n_qubits: usize,
    method: Method,
    max_layers: usize,
    rng: &mut R,
) -> Result<DepthPurities> {
    let layers = build_generator_layers(n_qubits, GeneratorMethod::new(method, max_layers)?, rng)?;
    let mut state = StateVector::zero(n_qubits);
    layers
        .iter()
        .map(|layer| {
            state.apply(layer)?;
            leading_purities(&state)
        })
        .collect()
}

/// Depth purities of `ensemble` members, member `i` drawn from generator
/// stream `i`.
pub fn ensemble_depth_purities(
    n_qubits: usize,
    method: Method,
    max_layers: usize,
    ensemble: usize,
    streams: SeedStreams,
) -> Result<Vec<DepthPurities>> {
    (0..ensemble as u64)
        .into_par_iter()
        .map(|i| {
            member_depth_purities(n_qubits, method, max_layers, &mut streams.stream(domain::GENERATOR, i))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub layers: usize,
    pub delta_mu: f64,
    pub delta_sigma2: f64,
    pub report: EnsembleReport,
}

fn report_at(
    purities: &[DepthPurities],
    members: impl Iterator<Item = usize>,
    depth: usize,
    n_qubits: usize,
    method: Method,
    seed: u64,
) -> Result<EnsembleReport> {
    let rows: Vec<Vec<f64>> = members.map(|i| purities[i][depth - 1].clone()).collect();
    EnsembleReport::from_purities(n_qubits as u32, &rows, method.name(), depth, seed)
}

/// Relative errors at every depth `1..=max_layers`.
pub fn convergence_study(
    n_qubits: usize,
    method: Method,
    max_layers: usize,
    ensemble: usize,
    streams: SeedStreams,
) -> Result<Vec<ConvergencePoint>> {
    if ensemble < 2 {
        return Err(Error::InsufficientData("ensemble statistics need at least 2 members".into()));
    }
    let purities = ensemble_depth_purities(n_qubits, method, max_layers, ensemble, streams)?;
    (1..=max_layers)
        .map(|m| {
            let report = report_at(&purities, 0..ensemble, m, n_qubits, method, streams.master())?;
            let (delta_mu, delta_sigma2) = relative_errors(&report)?;
            Ok(ConvergencePoint { layers: m, delta_mu, delta_sigma2, report })
        })
        .collect()
}

/// Bootstrap replicates of `(Δ̄_μ, Δ̄_σ²)` at one depth, resampling members.
pub fn bootstrap_relative_errors<R: Rng + ?Sized>(
    purities: &[DepthPurities],
    depth: usize,
    n_qubits: usize,
    method: Method,
    replicates: usize,
    rng: &mut R,
) -> Result<Vec<(f64, f64)>> {
    if purities.len() < 2 || purities.iter().any(|m| depth == 0 || m.len() < depth) {
        return Err(Error::InsufficientData(format!("no depth-{depth} purities for every member")));
    }
    let mut failure = None;
    let mut sigma2 = Vec::with_capacity(replicates);
    let mu = stats::bootstrap(purities.len(), replicates, rng, |idx| {
        let result = report_at(purities, idx.iter().copied(), depth, n_qubits, method, 0)
            .and_then(|r| relative_errors(&r));
        match result {
            Ok((m, s)) => {
                sigma2.push(s);
                m
            }
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(mu.into_iter().zip(sigma2).collect())
}
