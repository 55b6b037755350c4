//! Exact pure-state and mixed-state simulation.

mod circuit;
mod density;
pub(crate) mod kernels;
mod state;

pub use circuit::{permutation_to_swaps, rotation_matrix, Axis, Circuit, GateOp};
pub use density::{purity, renyi2_entropy, DensityMatrix};
pub use state::{
    apply_circuit, reduced_density_matrix, sample_counts, subsystem_purity, StateVector,
};

pub(crate) use circuit::{max_norm, unitarity_deviation2, unitarity_deviation4, UNITARY_TOL};
pub(crate) use state::{counts_to_map, sample_outcomes, validate_subset};

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for q in start..n {
            cur.push(q);
            rec(q + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use nalgebra::Matrix4;
    use rand::Rng;
    use rand_distr::StandardNormal;

    use super::*;
    use crate::rng::seeded;
    use crate::{Error, C64};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell() -> StateVector {
        StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)])
            .unwrap()
    }

    fn ghz(n: usize) -> StateVector {
        let mut amps = vec![c(0.0); 1 << n];
        amps[0] = c(FRAC_1_SQRT_2);
        amps[(1 << n) - 1] = c(FRAC_1_SQRT_2);
        StateVector::from_amplitudes(amps).unwrap()
    }

    fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
        let amps = (0..1 << n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        StateVector::normalized(amps).unwrap()
    }

    fn assert_close(a: &[C64], b: &[C64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() < tol, "{x} vs {y}");
        }
    }

    #[test]
    fn ry_half_pi_makes_plus_state() {
        let mut c1 = Circuit::new(1);
        c1.push(GateOp::ry(0, PI / 2.0)).unwrap();
        let out = apply_circuit(&StateVector::zero(1), &c1).unwrap();
        assert_close(out.amplitudes(), &[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)], 1e-12);
    }

    #[test]
    fn cnot_truth_table() {
        let circuit = Circuit::from_ops(2, [GateOp::cnot(0, 1)]).unwrap();
        // |10⟩ has qubit 0 set, i.e. index 0b10.
        let out = apply_circuit(&StateVector::basis(2, 0b10).unwrap(), &circuit).unwrap();
        assert_eq!(out, StateVector::basis(2, 0b11).unwrap());
        let out = apply_circuit(&StateVector::basis(2, 0b01).unwrap(), &circuit).unwrap();
        assert_eq!(out, StateVector::basis(2, 0b01).unwrap());
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s = random_state(3, &mut seeded(1));
        assert_eq!(apply_circuit(&s, &Circuit::new(3)).unwrap(), s);
    }

    #[test]
    fn circuit_size_must_match() {
        let err = apply_circuit(&StateVector::zero(2), &Circuit::new(3)).unwrap_err();
        assert!(matches!(err, Error::SizeMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn reduced_density_matrices_of_simple_states() {
        let rho = reduced_density_matrix(&bell(), &[0]).unwrap();
        assert_close(rho.as_slice(), &[c(0.5), c(0.0), c(0.0), c(0.5)], 1e-15);

        let rho = reduced_density_matrix(&StateVector::zero(2), &[0]).unwrap();
        assert_close(rho.as_slice(), &[c(1.0), c(0.0), c(0.0), c(0.0)], 1e-15);

        let s = random_state(3, &mut seeded(2));
        let full = reduced_density_matrix(&s, &[0, 1, 2]).unwrap();
        assert_close(full.as_slice(), DensityMatrix::from_pure(&s).as_slice(), 1e-15);
        full.validate().unwrap();
    }

    #[test]
    fn invalid_subsystems_are_rejected() {
        let s = bell();
        for keep in [vec![], vec![2], vec![0, 0]] {
            assert!(matches!(
                reduced_density_matrix(&s, &keep),
                Err(Error::InvalidSubsystem { .. })
            ));
            assert!(subsystem_purity(&s, &keep).is_err());
        }
    }

    #[test]
    fn purity_and_entropy_reference_values() {
        let mixed1 = DensityMatrix::maximally_mixed(1);
        assert!((purity(&mixed1).unwrap() - 0.5).abs() < 1e-15);
        assert!((renyi2_entropy(&mixed1).unwrap() - 1.0).abs() < 1e-12);
        let mixed2 = DensityMatrix::maximally_mixed(2);
        assert!((renyi2_entropy(&mixed2).unwrap() - 2.0).abs() < 1e-12);
        for na in 1..=4 {
            let r = purity(&DensityMatrix::maximally_mixed(na)).unwrap();
            assert!((r - 2f64.powi(-(na as i32))).abs() < 1e-14);
        }
        let pure = DensityMatrix::from_pure(&random_state(3, &mut seeded(3)));
        assert!((purity(&pure).unwrap() - 1.0).abs() < 1e-12);
        assert!(renyi2_entropy(&pure).unwrap() < 1e-12);
    }

    #[test]
    fn density_matrix_constructor_checks_invariants() {
        let not_herm = vec![c(0.5), C64::new(0.0, 0.1), c(0.0), c(0.5)];
        assert!(DensityMatrix::new(1, not_herm).is_err());
        let bad_trace = vec![c(0.6), c(0.0), c(0.0), c(0.6)];
        assert!(DensityMatrix::new(1, bad_trace).is_err());
        let negative = vec![c(1.2), c(0.0), c(0.0), c(-0.2)];
        assert!(DensityMatrix::new(1, negative).is_err());
        assert!(DensityMatrix::new(1, vec![c(1.0)]).is_err());
        assert!(DensityMatrix::new(1, vec![c(0.5), c(0.0), c(0.0), c(0.5)]).is_ok());
    }

    #[test]
    fn fast_purity_of_entangled_states() {
        assert!((subsystem_purity(&bell(), &[0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((subsystem_purity(&ghz(4), &[0, 1]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fast_purity_matches_partial_trace_on_random_states() {
        let mut rng = seeded(4);
        let mut worst: f64 = 0.0;
        for _ in 0..500 {
            let s = random_state(6, &mut rng);
            let k = rng.random_range(1..=5);
            let keep = &subsets(6, k)[rng.random_range(0..subsets(6, k).len())];
            let fast = subsystem_purity(&s, keep).unwrap();
            let slow = purity(&reduced_density_matrix(&s, keep).unwrap()).unwrap();
            worst = worst.max((fast - slow).abs());
        }
        assert!(worst < 1e-10, "max deviation {worst}");
    }

    #[test]
    fn counts_of_basis_state() {
        let counts = sample_counts(&StateVector::zero(2), 1000, &mut seeded(5)).unwrap();
        assert_eq!(counts.len(), 1);
        assert_eq!(counts["00"], 1000);
    }

    #[test]
    fn counts_of_plus_state_are_binomial() {
        let plus = StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        let shots = 1_000_000u64;
        let counts = sample_counts(&plus, shots, &mut seeded(6)).unwrap();
        assert_eq!(counts.values().sum::<u64>(), shots);
        let bound = 3.0 * (0.25 / shots as f64).sqrt();
        for key in ["0", "1"] {
            let f = counts[key] as f64 / shots as f64;
            assert!((f - 0.5).abs() < bound, "{key}: {f}");
        }
    }

    #[test]
    fn sampling_is_deterministic_and_rejects_zero_shots() {
        let s = random_state(3, &mut seeded(7));
        let a = sample_counts(&s, 500, &mut seeded(8)).unwrap();
        let b = sample_counts(&s, 500, &mut seeded(8)).unwrap();
        assert_eq!(a, b);
        assert!(sample_counts(&s, 0, &mut seeded(8)).is_err());
    }

    #[test]
    fn two_qubit_unitary_matches_cnot() {
        let mut m = Matrix4::<C64>::zeros();
        for (r, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            m[(r, col)] = c(1.0);
        }
        let s = random_state(3, &mut seeded(9));
        let a = apply_circuit(&s, &Circuit::from_ops(3, [GateOp::two_qubit(m, 2, 0)]).unwrap())
            .unwrap();
        let b = apply_circuit(&s, &Circuit::from_ops(3, [GateOp::cnot(2, 0)]).unwrap()).unwrap();
        assert_close(a.amplitudes(), b.amplitudes(), 1e-15);
    }

    #[test]
    fn density_evolution_matches_pure_evolution() {
        let mut rng = seeded(10);
        let s = random_state(3, &mut rng);
        let mut circuit = Circuit::new(3);
        for _ in 0..10 {
            circuit.push(GateOp::ry(rng.random_range(0..3), rng.random::<f64>() * 6.0)).unwrap();
            circuit.push(GateOp::rz(rng.random_range(0..3), rng.random::<f64>() * 6.0)).unwrap();
            circuit.push(GateOp::cnot(0, 2)).unwrap();
            circuit.push(GateOp::Swap(1, 2)).unwrap();
            circuit.push(GateOp::Permutation(vec![2, 0, 1])).unwrap();
        }
        let mut rho = DensityMatrix::from_pure(&s);
        rho.apply(&circuit).unwrap();
        let expect = DensityMatrix::from_pure(&apply_circuit(&s, &circuit).unwrap());
        assert_close(rho.as_slice(), expect.as_slice(), 1e-12);
    }

    #[test]
    fn depolarizing_full_strength_gives_identity_on_qubit() {
        let mut rho = DensityMatrix::from_pure(&StateVector::zero(1));
        rho.depolarize(&[0], 1.0).unwrap();
        assert_close(rho.as_slice(), DensityMatrix::maximally_mixed(1).as_slice(), 1e-15);

        let mut rho = DensityMatrix::from_pure(&bell());
        rho.depolarize(&[1], 1.0).unwrap();
        let reduced = rho.reduce(&[0]).unwrap();
        assert_close(reduced.as_slice(), DensityMatrix::maximally_mixed(1).as_slice(), 1e-15);
        assert!((purity(&rho).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(subsets(3, 1), vec![vec![0], vec![1], vec![2]]);
    }
}
