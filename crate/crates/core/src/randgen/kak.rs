//! Cartan (KAK) decomposition of two-qubit unitaries.
//!
//! Any `U ∈ U(4)` factors as
//! `U = e^{iφ} (A3 ⊗ A4) · exp(i(a XX + b YY + c ZZ)) · (A1 ⊗ A2)`.
//! The local factors are found by moving to the magic basis, where local
//! gates become real orthogonal matrices and the interaction term becomes
//! diagonal, and diagonalizing the complex-symmetric `Uᵀ U` there with a real
//! orthogonal eigenbasis. The interaction term is then synthesized with three
//! CNOTs and three rotations, and every local factor is written as a ZYZ
//! Euler triple, giving at most 3 CNOTs and 15 `Ry`/`Rz` rotations.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use nalgebra::{Matrix2, Matrix4};
use rand::Rng;

use crate::rng::seeded;
use crate::simcore::{max_norm, rotation_matrix, unitarity_deviation4, Axis, Circuit, GateOp, UNITARY_TOL};
use crate::{Error, Result, C64};

/// Reconstruction tolerance (up to global phase).
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

const EIG_ATTEMPTS: usize = 100;

#[derive(Debug, Clone)]
pub struct KakDecomposition {
    /// `[A1, A2, A3, A4]`: `A1`/`A2` act first on qubits 0/1, `A3`/`A4`
    /// act last.
    pub locals: [Matrix2<C64>; 4],
    /// Interaction coefficients `(a, b, c)` of `exp(i(a XX + b YY + c ZZ))`,
    /// each folded into `(−π/4, π/4]`.
    pub cartan: [f64; 3],
    pub global_phase: f64,
    /// The synthesized two-qubit circuit (≤ 3 CNOT, ≤ 15 rotations).
    pub circuit: Circuit,
}

impl KakDecomposition {
    pub fn cnot_count(&self) -> usize {
        self.circuit.ops().iter().filter(|op| matches!(op, GateOp::Cnot { .. })).count()
    }

    pub fn rotation_count(&self) -> usize {
        self.circuit.rotation_count()
    }

    /// The circuit's ops relabeled onto qubits `(a, b)`.
    pub fn ops_on(&self, a: usize, b: usize) -> Vec<GateOp> {
        let map = |q: usize| if q == 0 { a } else { b };
        self.circuit
            .ops()
            .iter()
            .map(|op| match op {
                GateOp::Rotation { axis, angle, target } => {
                    GateOp::Rotation { axis: *axis, angle: *angle, target: map(*target) }
                }
                GateOp::Cnot { control, target } => GateOp::cnot(map(*control), map(*target)),
                other => unreachable!("synthesized circuits only hold rotations and CNOTs: {other:?}"),
            })
            .collect()
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn magic() -> Matrix4<C64> {
    let s = FRAC_1_SQRT_2;
    Matrix4::new(
        c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, s),
        c(0.0, 0.0), c(0.0, s), c(s, 0.0), c(0.0, 0.0),
        c(0.0, 0.0), c(0.0, s), c(-s, 0.0), c(0.0, 0.0),
        c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -s),
    )
}

fn pauli_x() -> Matrix2<C64> {
    Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

fn pauli_y() -> Matrix2<C64> {
    Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

fn pauli_z() -> Matrix2<C64> {
    Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

pub(crate) fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

/// Splits `K ≈ e^{iφ} A ⊗ B` into `(A, B)`, with `B ∈ SU(2)` and the phase
/// left in `A`.
fn split_product(k: &Matrix4<C64>) -> (Matrix2<C64>, Matrix2<C64>) {
    let block = |i: usize, j: usize| Matrix2::from_fn(|r, s| k[(2 * i + r, 2 * j + s)]);
    let (bi, bj) = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .max_by(|&(i, j), &(p, q)| block(i, j).norm().total_cmp(&block(p, q).norm()))
        .expect("four blocks");
    let kb = block(bi, bj);
    let b = kb / kb.determinant().sqrt();
    let a = Matrix2::from_fn(|i, j| (block(i, j) * b.adjoint()).trace() / 2.0);
    (a, b)
}

/// ZYZ Euler angles `(α, β, γ)` with `U ∝ Rz(α) Ry(β) Rz(γ)`.
pub fn euler_zyz(u: &Matrix2<C64>) -> (f64, f64, f64) {
    let v = u / u.determinant().sqrt();
    let beta = 2.0 * v[(1, 0)].norm().atan2(v[(0, 0)].norm());
    let sum = 2.0 * v[(1, 1)].arg();
    let diff = 2.0 * v[(1, 0)].arg();
    ((sum + diff) / 2.0, beta, (sum - diff) / 2.0)
}

fn euler_ops(u: &Matrix2<C64>, q: usize) -> [GateOp; 3] {
    let (alpha, beta, gamma) = euler_zyz(u);
    [GateOp::rz(q, gamma), GateOp::ry(q, beta), GateOp::rz(q, alpha)]
}

/// Unitary of a two-qubit circuit, obtained by simulating every basis state.
pub fn two_qubit_circuit_unitary(circuit: &Circuit) -> Result<Matrix4<C64>> {
    use crate::simcore::{apply_circuit, StateVector};
    if circuit.n_qubits() != 2 {
        return Err(Error::SizeMismatch { expected: 2, found: circuit.n_qubits() });
    }
    let mut m = Matrix4::zeros();
    for col in 0..4 {
        let out = apply_circuit(&StateVector::basis(2, col)?, circuit)?;
        for (row, a) in out.amplitudes().iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    Ok(m)
}

/// `min_φ max|u − e^{iφ} v|`, with `φ` taken from the overlap `Tr(v† u)`.
pub fn phase_distance(u: &Matrix4<C64>, v: &Matrix4<C64>) -> f64 {
    let overlap = (v.adjoint() * u).trace();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0, 0.0) };
    max_norm((u - v * phase).iter())
}

/// Real orthogonal `P` with `Pᵀ M P` diagonal, for a complex-symmetric
/// unitary `M`. Its real and imaginary parts commute, so a generic real
/// combination of them shares their eigenbasis; degenerate draws are retried.
fn diagonalize_symmetric_unitary(m: &Matrix4<C64>) -> Result<(Matrix4<f64>, [C64; 4])> {
    let re = m.map(|z| z.re);
    let im = m.map(|z| z.im);
    let mut rng = seeded(0x4b41_4b);
    let mut best = f64::INFINITY;
    for attempt in 0..EIG_ATTEMPTS {
        let (x, y) = if attempt == 0 {
            (1.0, 0.618_033_988_749_895)
        } else {
            (rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        };
        let eig = (re * x + im * y).symmetric_eigen();
        let p = eig.eigenvectors;
        let pc = p.map(|v| c(v, 0.0));
        let d = pc.transpose() * m * pc;
        let off = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| d[(i, j)].norm())
            .fold(0.0, f64::max);
        best = best.min(off);
        if off < 1e-13 {
            return Ok((p, [d[(0, 0)], d[(1, 1)], d[(2, 2)], d[(3, 3)]]));
        }
    }
    Err(Error::NoConvergence(format!(
        "magic-basis diagonalization failed after {EIG_ATTEMPTS} attempts (best off-diagonal {best:.3e})"
    )))
}

pub fn kak_decompose(u: &Matrix4<C64>) -> Result<KakDecomposition> {
    let deviation = unitarity_deviation4(u);
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let det = u.determinant();
    let mut global_phase = det.arg() / 4.0;
    let su = u * C64::from_polar(1.0, -global_phase);

    let b = magic();
    let bd = b.adjoint();
    let up = bd * su * b;
    let m2 = up.transpose() * up;
    let (mut p, d) = diagonalize_symmetric_unitary(&m2)?;
    if p.determinant() < 0.0 {
        p.column_mut(3).neg_mut();
    }
    let pc = p.map(|v| c(v, 0.0));
    let mut theta: [f64; 4] = d.map(|z| z.arg() / 2.0);
    let k1_for = |theta: &[f64; 4]| {
        let inv = Matrix4::from_diagonal(&nalgebra::Vector4::from_fn(|k, _| {
            C64::from_polar(1.0, -theta[k])
        }));
        up * pc * inv
    };
    let mut k1 = k1_for(&theta);
    if k1.determinant().re < 0.0 {
        theta[0] += PI;
        k1 = k1_for(&theta);
    }

    // Interaction coefficients from the diagonal phases: in the magic basis
    // XX, YY and ZZ are diagonal ±1 patterns orthogonal to each other and to
    // the all-ones vector.
    let xx = bd * kron2(&pauli_x(), &pauli_x()) * b;
    let yy = bd * kron2(&pauli_y(), &pauli_y()) * b;
    let zz = bd * kron2(&pauli_z(), &pauli_z()) * b;
    let project = |m: &Matrix4<C64>| (0..4).map(|k| theta[k] * m[(k, k)].re).sum::<f64>() / 4.0;
    let mut coeffs = [project(&xx), project(&yy), project(&zz)];
    global_phase += theta.iter().sum::<f64>() / 4.0;

    let left = b * k1 * bd;
    let mut right = b * pc.transpose() * bd;

    // Fold each coefficient into (−π/4, π/4]: exp(i π/2 PP) = i PP.
    let paulis = [pauli_x(), pauli_y(), pauli_z()];
    for (coef, pauli) in coeffs.iter_mut().zip(&paulis) {
        let k = ((*coef + PI / 4.0) / FRAC_PI_2).ceil() - 1.0;
        if k != 0.0 {
            *coef -= k * FRAC_PI_2;
            let steps = (k as i64).rem_euclid(4);
            for _ in 0..steps {
                right = kron2(pauli, pauli) * right;
                global_phase += FRAC_PI_2;
            }
        }
    }
    let [ca, cb, cc] = coeffs;

    let (l0, l1) = split_product(&left);
    let (r0, r1) = split_product(&right);
    // The fixed frame rotations around the CNOT core merge into the locals.
    let a1 = r0;
    let a2 = rotation_matrix(Axis::Z, -FRAC_PI_2) * r1;
    let a3 = l0 * rotation_matrix(Axis::Z, FRAC_PI_2);
    let a4 = l1;

    let mut circuit = Circuit::new(2);
    let mut ops: Vec<GateOp> = Vec::with_capacity(18);
    ops.extend(euler_ops(&a1, 0));
    ops.extend(euler_ops(&a2, 1));
    ops.push(GateOp::cnot(1, 0));
    ops.push(GateOp::rz(0, FRAC_PI_2 - 2.0 * cc));
    ops.push(GateOp::ry(1, 2.0 * ca - FRAC_PI_2));
    ops.push(GateOp::cnot(0, 1));
    ops.push(GateOp::ry(1, FRAC_PI_2 - 2.0 * cb));
    ops.push(GateOp::cnot(1, 0));
    ops.extend(euler_ops(&a3, 0));
    ops.extend(euler_ops(&a4, 1));
    for op in ops {
        circuit.push(op)?;
    }

    let rebuilt = two_qubit_circuit_unitary(&circuit)?;
    let err = phase_distance(u, &rebuilt);
    if !(err < RECONSTRUCTION_TOL) {
        return Err(Error::NoConvergence(format!(
            "KAK reconstruction error {err:.3e} exceeds {RECONSTRUCTION_TOL:e}"
        )));
    }
    Ok(KakDecomposition {
        locals: [a1, a2, a3, a4],
        cartan: coeffs,
        global_phase,
        circuit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen::haar_unitary4;

    fn cnot() -> Matrix4<C64> {
        let mut m = Matrix4::zeros();
        for (r, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            m[(r, col)] = c(1.0, 0.0);
        }
        m
    }

    #[test]
    fn magic_basis_maps_locals_to_real_orthogonal() {
        let mut rng = seeded(11);
        let a = crate::randgen::haar_unitary2(&mut rng);
        let bm = crate::randgen::haar_unitary2(&mut rng);
        let (a, bm) = (a / a.determinant().sqrt(), bm / bm.determinant().sqrt());
        let k = magic().adjoint() * kron2(&a, &bm) * magic();
        assert!(k.map(|z| z.im.abs()).max() < 1e-12);
    }

    #[test]
    fn identity_has_trivial_interaction() {
        let d = kak_decompose(&Matrix4::identity()).unwrap();
        for coef in d.cartan {
            assert!(coef.abs() < 1e-9, "{:?}", d.cartan);
        }
        let rebuilt = two_qubit_circuit_unitary(&d.circuit).unwrap();
        assert!(phase_distance(&Matrix4::identity(), &rebuilt) < 1e-9);
    }

    #[test]
    fn cnot_round_trip() {
        let d = kak_decompose(&cnot()).unwrap();
        let rebuilt = two_qubit_circuit_unitary(&d.circuit).unwrap();
        assert!(phase_distance(&cnot(), &rebuilt) < 1e-9);
        // CNOT is locally equivalent to exp(iπ/4 XX).
        let mut sorted = d.cartan.map(f64::abs);
        sorted.sort_by(f64::total_cmp);
        assert!((sorted[2] - PI / 4.0).abs() < 1e-9 && sorted[1] < 1e-9, "{:?}", d.cartan);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = Matrix4::from_element(c(0.5, 0.0));
        assert!(matches!(kak_decompose(&m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn haar_round_trips_within_budget() {
        let mut rng = seeded(12);
        for _ in 0..200 {
            let u = haar_unitary4(&mut rng);
            let d = kak_decompose(&u).unwrap();
            assert!(d.cnot_count() <= 3);
            assert!(d.rotation_count() <= 15);
            let rebuilt = two_qubit_circuit_unitary(&d.circuit).unwrap();
            assert!(phase_distance(&u, &rebuilt) < RECONSTRUCTION_TOL);
        }
    }

    #[test]
    fn euler_angles_reconstruct() {
        let mut rng = seeded(13);
        for _ in 0..100 {
            let u = crate::randgen::haar_unitary2(&mut rng);
            let (a, b, g) = euler_zyz(&u);
            let r = rotation_matrix(Axis::Z, a) * rotation_matrix(Axis::Y, b) * rotation_matrix(Axis::Z, g);
            let overlap = (r.adjoint() * u).trace();
            let phase = overlap / overlap.norm();
            assert!(crate::simcore::max_norm((u - r * phase).iter()) < 1e-12);
        }
    }
}
