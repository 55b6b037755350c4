use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::CouplingGraph;
use super::noise::{apply_readout_flips, NoiseModel};
use super::noisy::evolve_noisy;
use super::routing::{cnot_count, compact_circuit, used_qubits, Router};
use crate::randgen::{direct_block_ops, haar_unitary4, kak_decompose, sample_direct_angles, Method};
use crate::randmeas::{draw_settings, setting_estimate, Measurable, ShotRecord};
use crate::rng::{domain, SeedStreams};
use crate::simcore::{
    counts_to_map, purity, sample_outcomes, subsets, subsystem_purity, Circuit, DensityMatrix,
    StateVector,
};
use crate::{stats, Error, Result};

/// Ordered qubit pairs that receive one random block each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSchedule {
    pairs: Vec<(usize, usize)>,
}

impl PairSchedule {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidArgument("empty pair schedule".into()));
        }
        if let Some(&(a, _)) = pairs.iter().find(|(a, b)| a == b) {
            return Err(Error::RepeatedQubit(a));
        }
        Ok(Self { pairs })
    }

    /// The fixed schedules for 4 and 6 qubits.
    pub fn preset(n_qubits: usize) -> Result<Self> {
        match n_qubits {
            4 => Self::new(vec![(0, 1), (2, 3), (0, 2), (1, 3)]),
            6 => Self::new(vec![
                (0, 1),
                (2, 3),
                (4, 5),
                (1, 2),
                (3, 4),
                (0, 5),
                (0, 3),
                (1, 4),
                (5, 2),
            ]),
            _ => Err(Error::UnknownPreset(format!("pair schedule for {n_qubits} qubits"))),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn min_qubits(&self) -> usize {
        self.pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0)
    }

    /// One pass over the schedule with fresh random blocks and no
    /// permutations. KAK blocks are compiled to CNOTs and rotations.
    pub fn block_circuit<R: Rng + ?Sized>(
        &self,
        n_qubits: usize,
        method: Method,
        rng: &mut R,
    ) -> Result<Circuit> {
        if self.min_qubits() > n_qubits {
            return Err(Error::SizeMismatch { expected: n_qubits, found: self.min_qubits() });
        }
        let mut circuit = Circuit::new(n_qubits);
        for &(a, b) in &self.pairs {
            let ops = match method {
                Method::Direct => direct_block_ops(&sample_direct_angles(rng), a, b).to_vec(),
                Method::Kak => kak_decompose(&haar_unitary4(rng))?.ops_on(a, b),
            };
            for op in ops {
                circuit.push(op)?;
            }
        }
        Ok(circuit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub ensemble: usize,
    pub settings: usize,
    pub shots: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Self { ensemble: 10, settings: 20, shots: 1000 }
    }
}

impl Budgets {
    pub fn validate(&self) -> Result<()> {
        if self.ensemble < 1 || self.settings < 2 || self.shots < 2 {
            return Err(Error::InsufficientData(format!(
                "budgets need N_e >= 1, N_m >= 2, N_s >= 2, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// A device: topology, noise and pair schedule.
#[derive(Debug, Clone)]
pub struct Device {
    pub graph: CouplingGraph,
    pub noise: NoiseModel,
    pub schedule: PairSchedule,
}

/// Ensemble averages for one subsystem size. Values for `n_a` are averaged
/// over all `n_a`-qubit subsets, then over the ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub n_a: usize,
    /// Randomized-measurement estimate from noisy counts.
    pub purity_est: f64,
    /// `sqrt(Σ se²) / N_e` over members' cross-setting standard errors.
    pub std_err: f64,
    /// Purity of the noisy density matrix.
    pub purity_exact: f64,
    /// Purity of the same circuits run without noise.
    pub purity_ideal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub n_qubits: usize,
    pub method: Method,
    pub budgets: Budgets,
    /// Routed CNOT count of one scheduled pass (identical across members).
    pub cnot_count: usize,
    pub rows: Vec<BenchmarkRow>,
}

impl BenchmarkReport {
    pub fn row(&self, n_a: usize) -> Option<&BenchmarkRow> {
        self.rows.iter().find(|r| r.n_a == n_a)
    }

    pub fn whole_state(&self) -> &BenchmarkRow {
        self.row(self.n_qubits).expect("report covers the whole register")
    }
}

/// A routed, compacted member circuit ready for density-matrix evolution.
struct Prepared {
    /// Circuit segments on the compact register.
    segments: Vec<Circuit>,
    /// Logical-to-compact layout after each segment.
    layouts: Vec<Vec<usize>>,
    width: usize,
    cnots: usize,
}

fn prepare(segments: &[Circuit], graph: &CouplingGraph) -> Result<Prepared> {
    let n = segments.first().map_or(0, Circuit::n_qubits);
    let mut router = Router::new(graph, n)?;
    let mut routed = Vec::with_capacity(segments.len());
    let mut layouts = Vec::with_capacity(segments.len());
    for seg in segments {
        routed.push(router.route(seg)?);
        layouts.push(router.layout().to_vec());
    }
    let used = used_qubits(&routed, n);
    let compact = |p: usize| used.binary_search(&p).expect("layout positions are used qubits");
    Ok(Prepared {
        segments: routed.iter().map(|c| compact_circuit(c, &used)).collect::<Result<_>>()?,
        layouts: layouts.into_iter().map(|l| l.into_iter().map(compact).collect()).collect(),
        width: used.len(),
        cnots: routed.iter().map(cnot_count).sum(),
    })
}

fn logical_subsets(n: usize, n_a: usize, layout: &[usize]) -> Vec<Vec<usize>> {
    subsets(n, n_a)
        .into_iter()
        .map(|s| s.into_iter().map(|l| layout[l]).collect())
        .collect()
}

fn mean_subset_purity(rho: &DensityMatrix, keeps: &[Vec<usize>]) -> Result<f64> {
    let values = keeps
        .iter()
        .map(|k| purity(&rho.reduce(k)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(stats::mean(&values))
}

struct MemberResult {
    estimates: Vec<(f64, f64)>,
    exact: Vec<f64>,
    ideal: Vec<f64>,
    cnots: usize,
}

fn benchmark_member(
    n: usize,
    method: Method,
    device: &Device,
    budgets: Budgets,
    streams: SeedStreams,
    member: u64,
) -> Result<MemberResult> {
    let logical = device.schedule.block_circuit(n, method, &mut streams.stream(domain::GENERATOR, member))?;
    let prepared = prepare(std::slice::from_ref(&logical), &device.graph)?;
    let mut rho = DensityMatrix::from_pure(&StateVector::zero(prepared.width));
    evolve_noisy(&mut rho, &prepared.segments[0], &device.noise)?;
    let layout = &prepared.layouts[0];

    let settings = draw_settings(
        prepared.width,
        budgets.settings,
        &mut streams.stream(domain::SETTINGS, member),
    )?;
    let mut shots_rng = streams.stream(domain::SHOTS, member);
    let records = settings
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let probs = apply_readout_flips(&rho.rotated_probabilities(s)?, prepared.width, device.noise.p_spam);
            let counts = sample_outcomes(&probs, budgets.shots, &mut shots_rng);
            Ok(ShotRecord { setting: i, n_shots: budgets.shots, counts: counts_to_map(&counts, prepared.width) })
        })
        .collect::<Result<Vec<_>>>()?;

    let ideal_state = crate::simcore::apply_circuit(&StateVector::zero(n), &logical)?;
    let mut out = MemberResult { estimates: Vec::new(), exact: Vec::new(), ideal: Vec::new(), cnots: prepared.cnots };
    for n_a in 1..=n {
        let keeps = logical_subsets(n, n_a, layout);
        // Per-setting values averaged over subsets keep the setting-to-setting
        // spread as the error estimate.
        let per_setting = records
            .iter()
            .map(|r| {
                let vals = keeps.iter().map(|k| setting_estimate(r, k)).collect::<Result<Vec<_>>>()?;
                Ok(stats::mean(&vals))
            })
            .collect::<Result<Vec<_>>>()?;
        out.estimates.push((stats::mean(&per_setting), stats::standard_error_of_mean(&per_setting)));
        out.exact.push(mean_subset_purity(&rho, &keeps)?);
        let ideal = subsets(n, n_a)
            .iter()
            .map(|k| subsystem_purity(&ideal_state, k))
            .collect::<Result<Vec<_>>>()?;
        out.ideal.push(stats::mean(&ideal));
    }
    Ok(out)
}

/// Scheduled random circuits routed onto a device, evolved under its noise,
/// and read out through noisy randomized measurements.
pub fn hardware_benchmark(
    n_qubits: usize,
    method: Method,
    device: &Device,
    budgets: Budgets,
    streams: SeedStreams,
) -> Result<BenchmarkReport> {
    budgets.validate()?;
    let members = (0..budgets.ensemble as u64)
        .into_par_iter()
        .map(|m| benchmark_member(n_qubits, method, device, budgets, streams, m))
        .collect::<Result<Vec<_>>>()?;
    let ne = members.len() as f64;
    let rows = (0..n_qubits)
        .map(|k| {
            let col = |f: &dyn Fn(&MemberResult) -> f64| members.iter().map(f).sum::<f64>() / ne;
            BenchmarkRow {
                n_a: k + 1,
                purity_est: col(&|m| m.estimates[k].0),
                std_err: members.iter().map(|m| m.estimates[k].1.powi(2)).sum::<f64>().sqrt() / ne,
                purity_exact: col(&|m| m.exact[k]),
                purity_ideal: col(&|m| m.ideal[k]),
            }
        })
        .collect();
    Ok(BenchmarkReport {
        n_qubits,
        method,
        budgets,
        cnot_count: members.iter().map(|m| m.cnots).max().unwrap_or(0),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionRow {
    pub step: usize,
    pub n_a: usize,
    pub purity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionReport {
    pub n_qubits: usize,
    pub method: Method,
    pub ensemble: usize,
    /// Ordered by step, then `n_a`.
    pub rows: Vec<EvolutionRow>,
}

impl EvolutionReport {
    pub fn purity(&self, step: usize, n_a: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.step == step && r.n_a == n_a).map(|r| r.purity)
    }

    pub fn curve(&self, n_a: usize) -> Vec<f64> {
        self.rows.iter().filter(|r| r.n_a == n_a).map(|r| r.purity).collect()
    }
}

fn evolution_member(
    n: usize,
    method: Method,
    device: &Device,
    max_steps: usize,
    streams: SeedStreams,
    member: u64,
) -> Result<Vec<Vec<f64>>> {
    let mut rng = streams.stream(domain::GENERATOR, member);
    let steps = (0..max_steps)
        .map(|_| device.schedule.block_circuit(n, method, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let prepared = prepare(&steps, &device.graph)?;
    let mut rho = DensityMatrix::from_pure(&StateVector::zero(prepared.width));
    prepared
        .segments
        .iter()
        .zip(&prepared.layouts)
        .map(|(segment, layout)| {
            evolve_noisy(&mut rho, segment, &device.noise)?;
            (1..=n).map(|n_a| mean_subset_purity(&rho, &logical_subsets(n, n_a, layout))).collect()
        })
        .collect()
}

/// Exact purities after each of `max_steps` scheduled passes, averaged over
/// subsets of each size and over `ensemble` members.
pub fn evolution_study(
    n_qubits: usize,
    method: Method,
    device: &Device,
    max_steps: usize,
    ensemble: usize,
    streams: SeedStreams,
) -> Result<EvolutionReport> {
    if max_steps < 1 || ensemble < 1 {
        return Err(Error::InvalidArgument("evolution needs at least one step and one member".into()));
    }
    let members = (0..ensemble as u64)
        .into_par_iter()
        .map(|m| evolution_member(n_qubits, method, device, max_steps, streams, m))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(max_steps * n_qubits);
    for step in 0..max_steps {
        for k in 0..n_qubits {
            let purity = members.iter().map(|m| m[step][k]).sum::<f64>() / ensemble as f64;
            rows.push(EvolutionRow { step: step + 1, n_a: k + 1, purity });
        }
    }
    Ok(EvolutionReport { n_qubits, method, ensemble, rows })
}
