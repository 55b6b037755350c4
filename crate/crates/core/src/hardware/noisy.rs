use super::noise::NoiseModel;
use crate::simcore::{Circuit, DensityMatrix, GateOp};
use crate::{Error, Result};

/// Evolves `rho` in place, following every rotation with single-qubit
/// depolarizing noise `p1` and every CNOT or two-qubit unitary with
/// two-qubit depolarizing noise `p2` on its pair. A SWAP runs as three
/// noisy CNOTs; permutations are noiseless relabelings.
pub fn evolve_noisy(rho: &mut DensityMatrix, circuit: &Circuit, noise: &NoiseModel) -> Result<()> {
    if circuit.n_qubits() != rho.n_qubits() {
        return Err(Error::SizeMismatch { expected: rho.n_qubits(), found: circuit.n_qubits() });
    }
    for op in circuit.ops() {
        match op {
            GateOp::Rotation { target, .. } => {
                rho.apply_op(op);
                rho.depolarize(&[*target], noise.p1)?;
            }
            GateOp::Cnot { control, target } => {
                rho.apply_op(op);
                rho.depolarize(&[*control, *target], noise.p2)?;
            }
            GateOp::TwoQubitUnitary { qubits, .. } => {
                rho.apply_op(op);
                rho.depolarize(qubits, noise.p2)?;
            }
            GateOp::Swap(a, b) => {
                for (c, t) in [(*a, *b), (*b, *a), (*a, *b)] {
                    rho.apply_op(&GateOp::cnot(c, t));
                    rho.depolarize(&[c, t], noise.p2)?;
                }
            }
            GateOp::Permutation(_) => rho.apply_op(op),
        }
    }
    rho.check_hermitian_trace()
}

pub fn apply_noisy_circuit(
    rho: &DensityMatrix,
    circuit: &Circuit,
    noise: &NoiseModel,
) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    evolve_noisy(&mut out, circuit, noise)?;
    Ok(out)
}
