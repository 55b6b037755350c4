use nalgebra::{DMatrix, Matrix2};

use super::circuit::{rotation_matrix, Circuit, GateOp};
use super::kernels;
use super::state::{validate_subset, StateVector};
use crate::{Error, Result, C64};

pub(crate) const HERMITIAN_TOL: f64 = 1e-10;
pub(crate) const TRACE_TOL: f64 = 1e-10;
pub(crate) const PSD_FLOOR: f64 = -1e-8;

/// A mixed state stored as a row-major `2^n × 2^n` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian, unit trace and positive
    /// semidefinite within tolerance.
    pub fn new(n_qubits: usize, data: Vec<C64>) -> Result<Self> {
        let rho = Self::from_raw_unchecked(n_qubits, data)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Shape check only, for matrices produced by invariant-preserving maps.
    pub(crate) fn from_raw_unchecked(n_qubits: usize, data: Vec<C64>) -> Result<Self> {
        if n_qubits == 0 || data.len() != 1usize << (2 * n_qubits) {
            return Err(Error::InvalidDensityMatrix(format!(
                "{} entries do not form a {n_qubits}-qubit matrix",
                data.len()
            )));
        }
        Ok(Self { n_qubits, data })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let data = amps
            .iter()
            .flat_map(|a| amps.iter().map(move |b| a * b.conj()))
            .collect();
        Self { n_qubits: state.n_qubits(), data }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        let mut data = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            data[i * d + i] = C64::new(1.0 / d as f64, 0.0);
        }
        Self { n_qubits, data }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn to_matrix(&self) -> DMatrix<C64> {
        let d = self.dim();
        DMatrix::from_row_slice(d, d, &self.data)
    }

    pub fn trace(&self) -> C64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i]).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i].re).collect()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// Cheap checks: Hermitian and unit trace.
    pub(crate) fn check_hermitian_trace(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} differs from 1")));
        }
        Ok(())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.to_matrix();
        // Symmetrize so round-off does not leak into the solver.
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        self.check_hermitian_trace()?;
        let min = self.min_eigenvalue();
        if min < PSD_FLOOR {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    fn apply_1q_both(&mut self, q: usize, m: &Matrix2<C64>) {
        let n = self.n_qubits;
        kernels::apply_1q(&mut self.data, 2 * n, q, m);
        kernels::apply_1q(&mut self.data, 2 * n, n + q, &m.map(|z| z.conj()));
    }

    /// `U ρ U†` for one op.
    pub(crate) fn apply_op(&mut self, op: &GateOp) {
        let n = self.n_qubits;
        let data = &mut self.data;
        match op {
            GateOp::Rotation { axis, angle, target } => {
                self.apply_1q_both(*target, &rotation_matrix(*axis, *angle))
            }
            GateOp::Cnot { control, target } => {
                kernels::apply_cnot(data, 2 * n, *control, *target);
                kernels::apply_cnot(data, 2 * n, n + control, n + target);
            }
            GateOp::Swap(a, b) => {
                kernels::apply_swap(data, 2 * n, *a, *b);
                kernels::apply_swap(data, 2 * n, n + a, n + b);
            }
            GateOp::TwoQubitUnitary { matrix, qubits } => {
                let [a, b] = *qubits;
                kernels::apply_2q(data, 2 * n, a, b, matrix);
                kernels::apply_2q(data, 2 * n, n + a, n + b, &matrix.map(|z| z.conj()));
            }
            GateOp::Permutation(perm) => {
                let doubled: Vec<usize> =
                    perm.iter().copied().chain(perm.iter().map(|p| p + n)).collect();
                *data = kernels::permute_qubits(data, 2 * n, &doubled);
            }
        }
    }

    pub(crate) fn apply_single_qubit(&mut self, q: usize, m: &Matrix2<C64>) {
        self.apply_1q_both(q, m);
    }

    /// Unitary (noiseless) evolution under a circuit.
    pub fn apply(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, found: circuit.n_qubits() });
        }
        for op in circuit.ops() {
            self.apply_op(op);
        }
        Ok(())
    }

    /// Partial trace onto `keep` (kept qubits in ascending label order).
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = validate_subset(keep, self.n_qubits)?;
        if keep.len() == self.n_qubits {
            return Ok(self.clone());
        }
        let rest: Vec<usize> = (0..self.n_qubits).filter(|q| !keep.contains(q)).collect();
        let (na, nb) = (1usize << keep.len(), 1usize << rest.len());
        let d = self.dim();
        // full[a * nb + b]: basis index with kept bits `a` and traced bits `b`.
        let mut full = vec![0usize; d];
        for i in 0..d {
            let (a, b) = kernels::split_index(i, self.n_qubits, &keep, &rest);
            full[a * nb + b] = i;
        }
        let mut out = vec![C64::new(0.0, 0.0); na * na];
        for a in 0..na {
            for a2 in 0..na {
                out[a * na + a2] = (0..nb)
                    .map(|b| self.data[full[a * nb + b] * d + full[a2 * nb + b]])
                    .sum();
            }
        }
        Ok(DensityMatrix { n_qubits: keep.len(), data: out })
    }

    /// The depolarizing channel on the qubits in `targets`:
    /// `ρ ↦ (1 − p) ρ + p · (I/d_S ⊗ Tr_S ρ)`.
    pub fn depolarize(&mut self, targets: &[usize], p: f64) -> Result<()> {
        let targets = validate_subset(targets, self.n_qubits)?;
        if p == 0.0 {
            return Ok(());
        }
        let n = self.n_qubits;
        let rest: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
        let ds = (1usize << targets.len()) as f64;
        let traced = if rest.is_empty() { None } else { Some(self.reduce(&rest)?) };
        let d = self.dim();
        let split: Vec<(usize, usize)> =
            (0..d).map(|i| kernels::split_index(i, n, &targets, &rest)).collect();
        for i in 0..d {
            for j in 0..d {
                let (si, ri) = split[i];
                let (sj, rj) = split[j];
                let mut v = self.data[i * d + j] * (1.0 - p);
                if si == sj {
                    let sigma = match &traced {
                        Some(t) => t.get(ri, rj),
                        None => C64::new(1.0, 0.0),
                    };
                    v += sigma * (p / ds);
                }
                self.data[i * d + j] = v;
            }
        }
        Ok(())
    }
}

/// `Tr(ρ²)`. The input must be Hermitian with unit trace; an imaginary
/// residue above `1e-10` is reported as an invariant violation.
pub fn purity(rho: &DensityMatrix) -> Result<f64> {
    rho.check_hermitian_trace()?;
    let d = rho.dim();
    let mut total = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            total += rho.data[i * d + j] * rho.data[j * d + i];
        }
    }
    if total.im.abs() > HERMITIAN_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "purity has imaginary residue {:.3e}",
            total.im
        )));
    }
    Ok(total.re)
}

/// Second-order Rényi entropy in bits.
pub fn renyi2_entropy(rho: &DensityMatrix) -> Result<f64> {
    let r = purity(rho)?;
    Ok((-r.log2()).max(0.0))
}
