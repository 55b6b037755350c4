use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::circuit::{rotation_matrix, Circuit, GateOp};
use super::density::DensityMatrix;
use super::kernels;
use crate::{Error, Result, C64};

pub(crate) const NORM_TOL: f64 = 1e-10;

/// A normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0).expect("index 0 is always valid")
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidState("a register needs at least one qubit".into()));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidState(format!("basis index {index} >= {dim}")));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Wraps an amplitude vector; its length must be a power of two and its
    /// norm 1 within `1e-10`.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidState(format!("length {len} is not 2^n with n >= 1")));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(Self { n_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= n);
        Self::from_amplitudes(amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies a single op in place. The op must already be valid for this
    /// register (ops inside a [`Circuit`] always are).
    pub(crate) fn apply_op(&mut self, op: &GateOp) {
        let n = self.n_qubits;
        let amps = &mut self.amplitudes;
        match op {
            GateOp::Rotation { axis, angle, target } => {
                kernels::apply_1q(amps, n, *target, &rotation_matrix(*axis, *angle))
            }
            GateOp::Cnot { control, target } => kernels::apply_cnot(amps, n, *control, *target),
            GateOp::Swap(a, b) => kernels::apply_swap(amps, n, *a, *b),
            GateOp::TwoQubitUnitary { matrix, qubits } => {
                kernels::apply_2q(amps, n, qubits[0], qubits[1], matrix)
            }
            GateOp::Permutation(perm) => *amps = kernels::permute_qubits(amps, n, perm),
        }
    }

    pub(crate) fn apply_single_qubit(&mut self, q: usize, m: &nalgebra::Matrix2<C64>) {
        kernels::apply_1q(&mut self.amplitudes, self.n_qubits, q, m);
    }

    /// Applies `circuit` in place.
    pub fn apply(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, found: circuit.n_qubits() });
        }
        for op in circuit.ops() {
            self.apply_op(op);
        }
        Ok(())
    }

    /// Amplitudes reshaped to an `N_A × N_B` row-major matrix, kept qubits
    /// forming the row index.
    fn bipartite_matrix(&self, keep: &[usize]) -> Result<(Vec<C64>, usize, usize)> {
        let keep = validate_subset(keep, self.n_qubits)?;
        let rest: Vec<usize> = (0..self.n_qubits).filter(|q| !keep.contains(q)).collect();
        let (na, nb) = (1usize << keep.len(), 1usize << rest.len());
        let mut psi = vec![C64::new(0.0, 0.0); na * nb];
        for (i, &a) in self.amplitudes.iter().enumerate() {
            let (ia, ib) = kernels::split_index(i, self.n_qubits, &keep, &rest);
            psi[ia * nb + ib] = a;
        }
        Ok((psi, na, nb))
    }
}

fn norm(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Checks a subsystem and returns it sorted.
pub(crate) fn validate_subset(keep: &[usize], n_qubits: usize) -> Result<Vec<usize>> {
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if keep.is_empty() || sorted.len() != keep.len() || sorted.iter().any(|&q| q >= n_qubits) {
        return Err(Error::InvalidSubsystem { keep: keep.to_vec(), n_qubits });
    }
    Ok(sorted)
}

pub fn apply_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(circuit)?;
    Ok(out)
}

/// `Tr_B |ψ⟩⟨ψ|` where `B` is the complement of `keep`. The kept qubits are
/// ordered by ascending label in the output.
pub fn reduced_density_matrix(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let (psi, na, nb) = state.bipartite_matrix(keep)?;
    let mut rho = vec![C64::new(0.0, 0.0); na * na];
    for i in 0..na {
        for j in 0..na {
            rho[i * na + j] = (0..nb).map(|k| psi[i * nb + k] * psi[j * nb + k].conj()).sum();
        }
    }
    DensityMatrix::from_raw_unchecked(keep.len(), rho)
}

/// `Tr(ρ_A²)` without forming `ρ_A`: the amplitudes are reshaped into
/// `Ψ` (`N_A × N_B`) and the Gram matrix on the smaller side is contracted.
pub fn subsystem_purity(state: &StateVector, keep: &[usize]) -> Result<f64> {
    let (psi, na, nb) = state.bipartite_matrix(keep)?;
    // Gram on rows (ΨΨ†) or columns (Ψ†Ψ); both share the nonzero spectrum.
    let (rows, cols, stride_r, stride_c) = if na <= nb { (na, nb, nb, 1) } else { (nb, na, 1, nb) };
    let at = |r: usize, c: usize| psi[r * stride_r + c * stride_c];
    let mut total = 0.0;
    for i in 0..rows {
        for j in i..rows {
            let g: C64 = (0..cols).map(|k| at(i, k) * at(j, k).conj()).sum();
            total += if i == j { g.norm_sqr() } else { 2.0 * g.norm_sqr() };
        }
    }
    Ok(total)
}

/// Multinomial sample of `n_shots` outcomes from a probability vector, by
/// sequential conditional binomials. Deterministic for a given generator.
pub(crate) fn sample_outcomes<R: Rng + ?Sized>(probs: &[f64], n_shots: u64, rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = n_shots;
    let mut mass: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let p = p.max(0.0);
        if i + 1 == probs.len() {
            counts[i] = remaining;
            break;
        }
        let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let k = if q >= 1.0 {
            remaining
        } else if q <= 0.0 {
            0
        } else {
            Binomial::new(remaining, q).expect("valid binomial").sample(rng)
        };
        counts[i] = k;
        remaining -= k;
        mass -= p;
    }
    counts
}

pub(crate) fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if index & kernels::mask(n_qubits, q) != 0 { '1' } else { '0' })
        .collect()
}

pub(crate) fn counts_to_map(counts: &[u64], n_qubits: usize) -> BTreeMap<String, u64> {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (bitstring(i, n_qubits), c))
        .collect()
}

/// Computational-basis measurement counts keyed by bitstring (qubit 0 first).
pub fn sample_counts<R: Rng + ?Sized>(
    state: &StateVector,
    n_shots: u64,
    rng: &mut R,
) -> Result<BTreeMap<String, u64>> {
    if n_shots == 0 {
        return Err(Error::InvalidArgument("n_shots must be at least 1".into()));
    }
    let counts = sample_outcomes(&state.probabilities(), n_shots, rng);
    Ok(counts_to_map(&counts, state.n_qubits))
}
