use nalgebra::{Matrix2, Matrix4};

use crate::{Error, Result, C64};

pub(crate) const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Y,
    Z,
}

/// A single circuit instruction.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    /// `exp(-i angle σ/2)` on `target`.
    Rotation { axis: Axis, angle: f64, target: usize },
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
    /// A generic two-qubit unitary; `qubits[0]` is the high bit of the 4×4
    /// matrix index.
    TwoQubitUnitary {
        matrix: Box<Matrix4<C64>>,
        qubits: [usize; 2],
    },
    /// Relabels qubits: the content of qubit `i` moves to qubit `perm[i]`.
    Permutation(Vec<usize>),
}

impl GateOp {
    pub fn ry(target: usize, angle: f64) -> Self {
        GateOp::Rotation { axis: Axis::Y, angle, target }
    }

    pub fn rz(target: usize, angle: f64) -> Self {
        GateOp::Rotation { axis: Axis::Z, angle, target }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::Cnot { control, target }
    }

    pub fn two_qubit(matrix: Matrix4<C64>, a: usize, b: usize) -> Self {
        GateOp::TwoQubitUnitary { matrix: Box::new(matrix), qubits: [a, b] }
    }

    /// Qubits the op touches, in operand order. Permutations touch everything
    /// they move.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::Rotation { target, .. } => vec![*target],
            GateOp::Cnot { control, target } => vec![*control, *target],
            GateOp::Swap(a, b) => vec![*a, *b],
            GateOp::TwoQubitUnitary { qubits, .. } => qubits.to_vec(),
            GateOp::Permutation(p) => (0..p.len()).filter(|&i| p[i] != i).collect(),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(
            self,
            GateOp::Cnot { .. } | GateOp::Swap(..) | GateOp::TwoQubitUnitary { .. }
        )
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |q: usize| {
            if q < n_qubits {
                Ok(())
            } else {
                Err(Error::QubitOutOfRange { index: q, n_qubits })
            }
        };
        let pair = |a: usize, b: usize| {
            check(a)?;
            check(b)?;
            if a == b {
                Err(Error::RepeatedQubit(a))
            } else {
                Ok(())
            }
        };
        match self {
            GateOp::Rotation { target, .. } => check(*target),
            GateOp::Cnot { control, target } => pair(*control, *target),
            GateOp::Swap(a, b) => pair(*a, *b),
            GateOp::TwoQubitUnitary { matrix, qubits } => {
                pair(qubits[0], qubits[1])?;
                let deviation = unitarity_deviation4(matrix);
                if deviation > UNITARY_TOL {
                    return Err(Error::NotUnitary { deviation });
                }
                Ok(())
            }
            GateOp::Permutation(p) => {
                let mut seen = vec![false; p.len()];
                let valid = p.len() == n_qubits
                    && p.iter().all(|&d| d < p.len() && !std::mem::replace(&mut seen[d], true));
                if valid {
                    Ok(())
                } else {
                    Err(Error::InvalidPermutation(p.clone()))
                }
            }
        }
    }
}

pub fn rotation_matrix(axis: Axis, angle: f64) -> Matrix2<C64> {
    let half = angle / 2.0;
    match axis {
        Axis::Y => {
            let (s, c) = half.sin_cos();
            Matrix2::new(
                C64::new(c, 0.0),
                C64::new(-s, 0.0),
                C64::new(s, 0.0),
                C64::new(c, 0.0),
            )
        }
        Axis::Z => Matrix2::new(
            C64::from_polar(1.0, -half),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::from_polar(1.0, half),
        ),
    }
}

/// Largest entry modulus.
pub(crate) fn max_norm<'a>(entries: impl Iterator<Item = &'a C64>) -> f64 {
    entries.map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn unitarity_deviation2(m: &Matrix2<C64>) -> f64 {
    max_norm((m.adjoint() * m - Matrix2::identity()).iter())
}

pub(crate) fn unitarity_deviation4(m: &Matrix4<C64>) -> f64 {
    max_norm((m.adjoint() * m - Matrix4::identity()).iter())
}

/// Decomposes a qubit permutation into SWAPs that realize it when applied in
/// order.
pub fn permutation_to_swaps(perm: &[usize]) -> Vec<(usize, usize)> {
    let n = perm.len();
    // loc[i]: where the content originally on qubit i currently sits.
    let mut loc: Vec<usize> = (0..n).collect();
    let mut occupant: Vec<usize> = (0..n).collect();
    let mut swaps = Vec::new();
    for (src, &dest) in perm.iter().enumerate() {
        let here = loc[src];
        if here != dest {
            let other = occupant[dest];
            swaps.push((here, dest));
            occupant.swap(here, dest);
            loc[src] = dest;
            loc[other] = here;
        }
    }
    swaps
}

/// An ordered list of ops on a fixed-width register. Ops are validated on
/// insertion, so a `Circuit` never holds out-of-range indices or non-unitary
/// matrices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, ops: Vec::new() }
    }

    pub fn from_ops(n_qubits: usize, ops: impl IntoIterator<Item = GateOp>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for op in ops {
            c.push(op)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        self.ops.extend_from_slice(&other.ops);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn rotation_count(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, GateOp::Rotation { .. })).count()
    }

    pub fn permutation_count(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, GateOp::Permutation(_))).count()
    }
}
