//! Purity estimation from randomized local measurements.
//!
//! Each setting applies an independent Haar single-qubit unitary to every
//! qubit before a computational-basis measurement. For a subsystem `A` of
//! `n_a` qubits the per-setting estimator is
//!
//! ```text
//! X = 2^{n_a} Σ_{s,s'} (−2)^{−D(s,s')} P̂(s)P̂(s')
//! ```
//!
//! with `D` the Hamming distance and `P̂(s)P̂(s')` the unbiased product
//! estimator from counts. The weight matrix factorizes over qubits as
//! `K^{⊗n_a}` with `K = [[1, −1/2], [−1/2, 1]]`, so the double sum is a
//! quadratic form evaluated in `O(n_a 2^{n_a})`.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use nalgebra::Matrix2;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::randgen::haar_unitary2;
use crate::simcore::{
    counts_to_map, sample_outcomes, unitarity_deviation2, validate_subset, DensityMatrix,
    StateVector,
};
use crate::{stats, Error, Result, C64};

pub const SETTING_UNITARY_TOL: f64 = 1e-12;
pub const DEFAULT_SETTINGS: usize = 20;
pub const DEFAULT_SHOTS: u64 = 1000;

/// One local unitary per qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    unitaries: Vec<Matrix2<C64>>,
}

impl MeasurementSetting {
    pub fn new(unitaries: Vec<Matrix2<C64>>) -> Result<Self> {
        if unitaries.is_empty() {
            return Err(Error::InvalidArgument("a setting needs at least one qubit".into()));
        }
        for u in &unitaries {
            let deviation = unitarity_deviation2(u);
            if deviation > SETTING_UNITARY_TOL {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(Self { unitaries })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { unitaries: vec![Matrix2::identity(); n_qubits] }
    }

    pub fn n_qubits(&self) -> usize {
        self.unitaries.len()
    }

    pub fn unitaries(&self) -> &[Matrix2<C64>] {
        &self.unitaries
    }
}

pub fn draw_settings<R: Rng + ?Sized>(
    n_qubits: usize,
    n_settings: usize,
    rng: &mut R,
) -> Result<Vec<MeasurementSetting>> {
    if n_settings < 2 {
        return Err(Error::InsufficientData(format!(
            "randomized measurements need at least 2 settings, got {n_settings}"
        )));
    }
    if n_qubits == 0 {
        return Err(Error::InvalidArgument("a setting needs at least one qubit".into()));
    }
    Ok((0..n_settings)
        .map(|_| MeasurementSetting {
            unitaries: (0..n_qubits).map(|_| haar_unitary2(rng)).collect(),
        })
        .collect())
}

/// Counts collected under one setting. Bitstrings list qubit 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub setting: usize,
    pub n_shots: u64,
    pub counts: BTreeMap<String, u64>,
}

impl ShotRecord {
    pub fn new(setting: usize, counts: BTreeMap<String, u64>) -> Result<Self> {
        let record = Self { setting, n_shots: counts.values().sum(), counts };
        record.validate()?;
        Ok(record)
    }

    /// Checks the record and returns its register width.
    pub fn validate(&self) -> Result<usize> {
        let bad = |msg: String| Err(Error::InvalidArgument(format!("record {}: {msg}", self.setting)));
        let Some(width) = self.counts.keys().next().map(String::len) else {
            return bad("no counts".into());
        };
        if width == 0 {
            return bad("empty bitstring".into());
        }
        for key in self.counts.keys() {
            if key.len() != width || !key.bytes().all(|b| b == b'0' || b == b'1') {
                return bad(format!("malformed bitstring {key:?}"));
            }
        }
        let total: u64 = self.counts.values().sum();
        if total != self.n_shots {
            return bad(format!("counts sum to {total}, expected {}", self.n_shots));
        }
        Ok(width)
    }

    pub fn n_qubits(&self) -> usize {
        self.counts.keys().next().map_or(0, String::len)
    }
}

/// Writes records as JSON lines.
pub fn write_records<W: Write>(mut out: W, records: &[ShotRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads and validates JSON-lines records; blank lines are skipped.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<ShotRecord>> {
    let mut records = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ShotRecord = serde_json::from_str(&line)?;
        record.validate()?;
        records.push(record);
    }
    Ok(records)
}

/// States that can be rotated by a setting and read out in the
/// computational basis.
pub trait Measurable {
    fn n_qubits(&self) -> usize;

    /// Outcome distribution after applying `setting`.
    fn rotated_probabilities(&self, setting: &MeasurementSetting) -> Result<Vec<f64>>;
}

fn check_width(expected: usize, setting: &MeasurementSetting) -> Result<()> {
    if setting.n_qubits() != expected {
        return Err(Error::SizeMismatch { expected, found: setting.n_qubits() });
    }
    Ok(())
}

impl Measurable for StateVector {
    fn n_qubits(&self) -> usize {
        StateVector::n_qubits(self)
    }

    fn rotated_probabilities(&self, setting: &MeasurementSetting) -> Result<Vec<f64>> {
        check_width(StateVector::n_qubits(self), setting)?;
        let mut s = self.clone();
        for (q, u) in setting.unitaries.iter().enumerate() {
            s.apply_single_qubit(q, u);
        }
        Ok(s.probabilities())
    }
}

impl Measurable for DensityMatrix {
    fn n_qubits(&self) -> usize {
        DensityMatrix::n_qubits(self)
    }

    fn rotated_probabilities(&self, setting: &MeasurementSetting) -> Result<Vec<f64>> {
        check_width(DensityMatrix::n_qubits(self), setting)?;
        let mut rho = self.clone();
        for (q, u) in setting.unitaries.iter().enumerate() {
            rho.apply_single_qubit(q, u);
        }
        Ok(rho.diagonal().into_iter().map(|p| p.max(0.0)).collect())
    }
}

/// One record per setting, each with `n_shots` multinomial shots.
pub fn simulate_randomized_measurements<S: Measurable + ?Sized, R: Rng + ?Sized>(
    state: &S,
    settings: &[MeasurementSetting],
    n_shots: u64,
    rng: &mut R,
) -> Result<Vec<ShotRecord>> {
    if n_shots == 0 {
        return Err(Error::InvalidArgument("n_shots must be at least 1".into()));
    }
    settings
        .iter()
        .enumerate()
        .map(|(i, setting)| {
            let probs = state.rotated_probabilities(setting)?;
            let counts = sample_outcomes(&probs, n_shots, rng);
            Ok(ShotRecord { setting: i, n_shots, counts: counts_to_map(&counts, state.n_qubits()) })
        })
        .collect()
}

fn project(bits: &str, keep: &[usize]) -> String {
    let bytes = bits.as_bytes();
    keep.iter().map(|&q| bytes[q] as char).collect()
}

/// Counts restricted to `keep` (ascending qubit order in the keys).
pub fn marginal_counts(record: &ShotRecord, keep: &[usize]) -> Result<BTreeMap<String, u64>> {
    let n = record.validate()?;
    let keep = validate_subset(keep, n)?;
    let mut out = BTreeMap::new();
    for (bits, &c) in &record.counts {
        *out.entry(project(bits, &keep)).or_insert(0) += c;
    }
    Ok(out)
}

/// Dense marginal count vector indexed like a `keep.len()`-qubit register.
fn marginal_vector(record: &ShotRecord, keep: &[usize]) -> Vec<f64> {
    let mut v = vec![0.0; 1 << keep.len()];
    for (bits, &c) in &record.counts {
        let bytes = bits.as_bytes();
        let idx = keep.iter().fold(0usize, |acc, &q| (acc << 1) | usize::from(bytes[q] == b'1'));
        v[idx] += c as f64;
    }
    v
}

/// `vᵀ K^{⊗k} v` for `K = [[1, −1/2], [−1/2, 1]]`.
fn hamming_form(v: &[f64]) -> f64 {
    let mut w = v.to_vec();
    let mut stride = 1;
    while stride < w.len() {
        for block in w.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                (*x, *y) = (*x - 0.5 * *y, *y - 0.5 * *x);
            }
        }
        stride *= 2;
    }
    v.iter().zip(&w).map(|(a, b)| a * b).sum()
}

/// Per-setting estimator `X` from a marginal distribution of exact
/// probabilities.
pub fn purity_from_probabilities(probs: &[f64]) -> Result<f64> {
    if probs.len() < 2 || !probs.len().is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "{} probabilities do not form a register",
            probs.len()
        )));
    }
    Ok(probs.len() as f64 * hamming_form(probs))
}

/// Per-setting estimator `X` from one record.
pub fn setting_estimate(record: &ShotRecord, keep: &[usize]) -> Result<f64> {
    let n = record.validate()?;
    let keep = validate_subset(keep, n)?;
    if record.n_shots < 2 {
        return Err(Error::InsufficientData(format!(
            "record {} has {} shots; the estimator needs at least 2",
            record.setting, record.n_shots
        )));
    }
    let total = record.n_shots as f64;
    let c = marginal_vector(record, &keep);
    // Σ c_s(c_s − 1) on the diagonal: subtract Σ c_s = N from the full form.
    let unbiased = (hamming_form(&c) - total) / (total * (total - 1.0));
    Ok((1usize << keep.len()) as f64 * unbiased)
}

/// Per-setting estimates of one subsystem, in record order.
pub fn setting_values(records: &[ShotRecord], keep: &[usize]) -> Result<Vec<f64>> {
    if records.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 settings, got {}",
            records.len()
        )));
    }
    let width = records[0].n_qubits();
    records
        .iter()
        .map(|r| {
            if r.n_qubits() != width {
                return Err(Error::SizeMismatch { expected: width, found: r.n_qubits() });
            }
            setting_estimate(r, keep)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PurityEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

impl PurityEstimate {
    /// Mean and standard error of per-setting values.
    pub fn from_setting_values(values: &[f64]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InsufficientData("need at least 2 setting values".into()));
        }
        Ok(Self { estimate: stats::mean(values), std_error: stats::standard_error_of_mean(values) })
    }
}

/// Purity of the subsystem `keep`, unclipped, with its cross-setting
/// standard error.
pub fn estimate_purity(records: &[ShotRecord], keep: &[usize]) -> Result<PurityEstimate> {
    PurityEstimate::from_setting_values(&setting_values(records, keep)?)
}

/// The infinite-shot limit of [`estimate_purity`] for the given settings.
pub fn estimate_purity_exact<S: Measurable + ?Sized>(
    state: &S,
    settings: &[MeasurementSetting],
    keep: &[usize],
) -> Result<PurityEstimate> {
    let keep = validate_subset(keep, state.n_qubits())?;
    let values = settings
        .iter()
        .map(|s| {
            let probs = state.rotated_probabilities(s)?;
            purity_from_probabilities(&marginal_probabilities(&probs, state.n_qubits(), &keep))
        })
        .collect::<Result<Vec<_>>>()?;
    PurityEstimate::from_setting_values(&values)
}

/// Sums a full-register distribution down to `keep` (ascending order).
pub fn marginal_probabilities(probs: &[f64], n_qubits: usize, keep: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; 1 << keep.len()];
    for (i, &p) in probs.iter().enumerate() {
        let idx = keep
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((i >> (n_qubits - 1 - q)) & 1));
        out[idx] += p;
    }
    out
}
