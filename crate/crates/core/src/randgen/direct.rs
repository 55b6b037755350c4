use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::simcore::{Circuit, GateOp};
use crate::{Error, Result};

/// Angles of the one-CNOT random-state block
/// `Ry(θ1)·CNOT·[Rz(θ2) Ry(θ3) Rz(θ4)] ⊗ [Ry(θ5) Rz(θ6)]`.
///
/// `θ1, θ3, θ5 ∈ [0, π]`; `θ2, θ4, θ6 ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectAngles(pub [f64; 6]);

impl DirectAngles {
    pub fn new(theta: [f64; 6]) -> Result<Self> {
        let polar_ok = [0, 2, 4].iter().all(|&i| (0.0..=PI).contains(&theta[i]));
        let phase_ok = [1, 3, 5].iter().all(|&i| (0.0..TAU).contains(&theta[i]));
        if polar_ok && phase_ok {
            Ok(Self(theta))
        } else {
            Err(Error::InvalidArgument(format!("direct angles out of range: {theta:?}")))
        }
    }

    pub fn zero() -> Self {
        Self([0.0; 6])
    }
}

/// Inverse CDF for the entangling angle: `cos θ1 = cbrt(1 − 2u)`, so `θ1`
/// has density `(3/2) cos²θ sin θ` on `[0, π]` and the Schmidt weight
/// `x = cos²(θ1/2)` has density `3(2x − 1)²`.
pub fn entangling_angle_from_uniform(u: f64) -> f64 {
    (1.0 - 2.0 * u).cbrt().clamp(-1.0, 1.0).acos()
}

/// Polar angle with `cos θ` uniform on `[−1, 1]`.
fn sphere_polar_from_uniform(u: f64) -> f64 {
    (1.0 - 2.0 * u).clamp(-1.0, 1.0).acos()
}

pub fn sample_direct_angles<R: Rng + ?Sized>(rng: &mut R) -> DirectAngles {
    let mut u = || rng.random::<f64>();
    DirectAngles([
        entangling_angle_from_uniform(u()),
        TAU * u(),
        sphere_polar_from_uniform(u()),
        TAU * u(),
        sphere_polar_from_uniform(u()),
        TAU * u(),
    ])
}

/// The block's ops acting on qubits `(a, b)`; `a` plays the role of the
/// first qubit.
pub fn direct_block_ops(angles: &DirectAngles, a: usize, b: usize) -> [GateOp; 7] {
    let [t1, t2, t3, t4, t5, t6] = angles.0;
    [
        GateOp::ry(a, t1),
        GateOp::cnot(a, b),
        GateOp::rz(a, t2),
        GateOp::ry(a, t3),
        GateOp::rz(a, t4),
        GateOp::ry(b, t5),
        GateOp::rz(b, t6),
    ]
}

pub fn build_direct_circuit(angles: &DirectAngles) -> Circuit {
    Circuit::from_ops(2, direct_block_ops(angles, 0, 1)).expect("valid two-qubit ops")
}
