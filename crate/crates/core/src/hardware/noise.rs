use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::simcore::{counts_to_map, sample_outcomes, DensityMatrix};
use crate::{Error, Result};

/// Depolarizing and readout error rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub p_spam: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, p_spam: f64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2), ("p_spam", p_spam)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(Self { p1, p2, p_spam })
    }

    pub fn ideal() -> Self {
        Self { p1: 0.0, p2: 0.0, p_spam: 0.0 }
    }

    /// Average gate fidelities to depolarizing probabilities,
    /// `p = d²/(d² − 1) · (1 − F)`; the SPAM infidelity is the flip rate.
    pub fn from_fidelities(f1: f64, f2: f64, f_spam: f64) -> Result<Self> {
        Self::new(4.0 / 3.0 * (1.0 - f1), 16.0 / 15.0 * (1.0 - f2), 1.0 - f_spam)
    }

    pub fn lagos() -> Self {
        Self::from_fidelities(0.9998, 0.9924, 0.9862).expect("static preset")
    }

    pub fn harmony() -> Self {
        Self::from_fidelities(0.9972, 0.96541, 0.99709).expect("static preset")
    }

    /// `"lagos"`, `"harmony"` or `"ideal"`.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "lagos" | "lagos7" => Ok(Self::lagos()),
            "harmony" | "harmony11" => Ok(Self::harmony()),
            "ideal" => Ok(Self::ideal()),
            _ => Err(Error::UnknownPreset(name.to_string())),
        }
    }

    pub fn is_ideal(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_spam == 0.0
    }
}

/// Outcome distribution after independent readout flips with probability
/// `p` on every bit.
pub fn apply_readout_flips(probs: &[f64], n_qubits: usize, p: f64) -> Vec<f64> {
    let mut out = probs.to_vec();
    if p == 0.0 {
        return out;
    }
    for q in 0..n_qubits {
        let m = 1usize << (n_qubits - 1 - q);
        for i in 0..out.len() {
            if i & m == 0 {
                let (a, b) = (out[i], out[i | m]);
                out[i] = (1.0 - p) * a + p * b;
                out[i | m] = (1.0 - p) * b + p * a;
            }
        }
    }
    out
}

/// Computational-basis counts with SPAM bit flips.
pub fn noisy_measure<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    noise: &NoiseModel,
    n_shots: u64,
    rng: &mut R,
) -> Result<BTreeMap<String, u64>> {
    if n_shots == 0 {
        return Err(Error::InvalidArgument("n_shots must be at least 1".into()));
    }
    let probs: Vec<f64> = rho.diagonal().into_iter().map(|p| p.max(0.0)).collect();
    let flipped = apply_readout_flips(&probs, rho.n_qubits(), noise.p_spam);
    Ok(counts_to_map(&sample_outcomes(&flipped, n_shots, rng), rho.n_qubits()))
}
