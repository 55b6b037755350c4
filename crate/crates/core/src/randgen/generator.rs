use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::direct::{direct_block_ops, sample_direct_angles};
use super::haar::haar_unitary4;
use crate::simcore::{Circuit, GateOp};
use crate::{Error, Result};

/// How each two-qubit block is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// One-CNOT random-state block with sampled angles.
    Direct,
    /// Haar-random SU(4) block (3 CNOTs once compiled).
    Kak,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Kak => "kak",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Method::Direct),
            "kak" => Ok(Method::Kak),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorMethod {
    pub kind: Method,
    pub layers: usize,
}

impl GeneratorMethod {
    pub fn new(kind: Method, layers: usize) -> Result<Self> {
        if layers < 1 {
            return Err(Error::InvalidArgument("generator needs at least one layer".into()));
        }
        Ok(Self { kind, layers })
    }
}

/// Ops of one random block on `(a, b)`. KAK blocks stay as a single
/// two-qubit unitary; compile them with `kak_decompose` where gate counts
/// matter.
pub fn random_block<R: Rng + ?Sized>(kind: Method, a: usize, b: usize, rng: &mut R) -> Vec<GateOp> {
    match kind {
        Method::Direct => direct_block_ops(&sample_direct_angles(rng), a, b).to_vec(),
        Method::Kak => vec![GateOp::two_qubit(haar_unitary4(rng), a, b)],
    }
}

/// The generator one layer at a time: each layer is a uniformly random qubit
/// permutation followed by blocks on `(0,1), (2,3), …`. For odd `n` the last
/// label idles.
pub fn build_generator_layers<R: Rng + ?Sized>(
    n_qubits: usize,
    method: GeneratorMethod,
    rng: &mut R,
) -> Result<Vec<Circuit>> {
    if n_qubits < 2 {
        return Err(Error::InvalidArgument("generator needs at least two qubits".into()));
    }
    (0..method.layers)
        .map(|_| {
            let mut layer = Circuit::new(n_qubits);
            let mut perm: Vec<usize> = (0..n_qubits).collect();
            perm.shuffle(rng);
            layer.push(GateOp::Permutation(perm))?;
            for pair in 0..n_qubits / 2 {
                for op in random_block(method.kind, 2 * pair, 2 * pair + 1, rng) {
                    layer.push(op)?;
                }
            }
            Ok(layer)
        })
        .collect()
}

pub fn build_generator_circuit<R: Rng + ?Sized>(
    n_qubits: usize,
    method: GeneratorMethod,
    rng: &mut R,
) -> Result<Circuit> {
    let mut circuit = Circuit::new(n_qubits);
    for layer in build_generator_layers(n_qubits, method, rng)? {
        circuit.extend(&layer)?;
    }
    Ok(circuit)
}
