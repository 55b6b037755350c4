use entangle_core::hardware::{
    apply_noisy_circuit, cnot_count, compact_circuit, evolution_study, hardware_benchmark,
    noisy_measure, route_circuit, used_qubits, Budgets, CouplingGraph, Device, NoiseModel,
    PairSchedule,
};
use entangle_core::moments::{exact_mean_purity, to_f64, BipartitionDims};
use entangle_core::randgen::{direct_block_ops, haar_unitary4, kak_decompose, DirectAngles, Method};
use entangle_core::rng::{seeded, SeedStreams};
use entangle_core::simcore::{apply_circuit, purity, Circuit, DensityMatrix, GateOp, StateVector};
use entangle_core::stats::chi_square_p_value;
use proptest::prelude::*;

fn op_strategy(n: usize) -> impl Strategy<Value = GateOp> {
    let pair = (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b);
    prop_oneof![
        (0..n, -3.0f64..3.0).prop_map(|(q, t)| GateOp::ry(q, t)),
        (0..n, -3.0f64..3.0).prop_map(|(q, t)| GateOp::rz(q, t)),
        pair.clone().prop_map(|(a, b)| GateOp::cnot(a, b)),
        pair.prop_map(|(a, b)| GateOp::Swap(a, b)),
    ]
}

fn circuit_strategy(n: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec(op_strategy(n), 1..25)
        .prop_map(move |ops| Circuit::from_ops(n, ops).unwrap())
}

/// Runs the routed circuit and moves every logical qubit back to its label,
/// with idle physical qubits after them.
fn routed_state_in_logical_order(circuit: &Circuit, graph: &CouplingGraph) -> (StateVector, usize) {
    let n = circuit.n_qubits();
    let routed = route_circuit(circuit, graph).unwrap();
    let used = used_qubits(std::slice::from_ref(&routed.circuit), n);
    let compact = compact_circuit(&routed.circuit, &used).unwrap();
    let mut state = apply_circuit(&StateVector::zero(used.len()), &compact).unwrap();
    let mut perm = vec![usize::MAX; used.len()];
    for (l, p) in routed.final_layout.iter().enumerate() {
        perm[used.binary_search(p).unwrap()] = l;
    }
    let mut next = n;
    for slot in perm.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }
    state.apply(&Circuit::from_ops(used.len(), [GateOp::Permutation(perm)]).unwrap()).unwrap();
    (state, used.len() - n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn routing_is_sound_and_neutral(circuit in circuit_strategy(5), lagos in any::<bool>()) {
        let graph = if lagos { CouplingGraph::lagos7() } else { CouplingGraph::line(5).unwrap() };
        let routed = route_circuit(&circuit, &graph).unwrap();
        for op in routed.circuit.ops() {
            if let GateOp::Cnot { control, target } = op {
                prop_assert!(graph.has_edge(*control, *target));
            }
            prop_assert!(!matches!(op, GateOp::Swap(..) | GateOp::Permutation(_)));
        }
        prop_assert!(cnot_count(&routed.circuit) >= cnot_count(&circuit));

        let expect = apply_circuit(&StateVector::zero(5), &circuit).unwrap();
        let (got, ancillas) = routed_state_in_logical_order(&circuit, &graph);
        for (i, a) in expect.amplitudes().iter().enumerate() {
            prop_assert!((got.amplitudes()[i << ancillas] - a).norm() < 1e-10);
        }
    }

    #[test]
    fn all_to_all_routing_is_free(circuit in circuit_strategy(4)) {
        let routed = route_circuit(&circuit, &CouplingGraph::all_to_all(4).unwrap()).unwrap();
        prop_assert_eq!(cnot_count(&routed.circuit), cnot_count(&circuit));
        prop_assert_eq!(routed.final_layout, vec![0, 1, 2, 3]);
    }
}

#[test]
fn block_cnot_counts() {
    let direct = Circuit::from_ops(2, direct_block_ops(&DirectAngles::zero(), 0, 1)).unwrap();
    assert_eq!(cnot_count(&direct), 1);
    let kak = kak_decompose(&haar_unitary4(&mut seeded(1))).unwrap();
    assert_eq!(cnot_count(&kak.circuit), 3);

    let schedule = PairSchedule::preset(4).unwrap();
    let graph = CouplingGraph::all_to_all(4).unwrap();
    for (method, expect) in [(Method::Direct, 4), (Method::Kak, 12)] {
        let c = schedule.block_circuit(4, method, &mut seeded(2)).unwrap();
        assert_eq!(cnot_count(&route_circuit(&c, &graph).unwrap().circuit), expect);
    }
    let c = schedule.block_circuit(4, Method::Direct, &mut seeded(2)).unwrap();
    assert!(cnot_count(&route_circuit(&c, &CouplingGraph::lagos7()).unwrap().circuit) > 4);
}

#[test]
fn schedule_presets() {
    assert_eq!(PairSchedule::preset(4).unwrap().pairs().len(), 4);
    assert_eq!(PairSchedule::preset(6).unwrap().pairs().len(), 9);
    assert!(PairSchedule::preset(5).is_err());
    assert!(PairSchedule::new(vec![(1, 1)]).is_err());
    let c = PairSchedule::preset(6).unwrap().block_circuit(6, Method::Direct, &mut seeded(3)).unwrap();
    assert_eq!(c.permutation_count(), 0);
    assert!(PairSchedule::preset(6).unwrap().block_circuit(4, Method::Direct, &mut seeded(3)).is_err());
}

#[test]
fn noiseless_channel_is_unitary_evolution() {
    let c = PairSchedule::preset(4).unwrap().block_circuit(4, Method::Direct, &mut seeded(4)).unwrap();
    let pure = apply_circuit(&StateVector::zero(4), &c).unwrap();
    let rho = DensityMatrix::from_pure(&StateVector::zero(4));
    let out = apply_noisy_circuit(&rho, &c, &NoiseModel::ideal()).unwrap();
    let expect = DensityMatrix::from_pure(&pure);
    for (a, b) in out.as_slice().iter().zip(expect.as_slice()) {
        assert!((a - b).norm() < 1e-10);
    }
}

#[test]
fn full_single_qubit_depolarizing() {
    let c = Circuit::from_ops(1, [GateOp::ry(0, 0.0)]).unwrap();
    let noise = NoiseModel::new(1.0, 0.0, 0.0).unwrap();
    let out = apply_noisy_circuit(&DensityMatrix::from_pure(&StateVector::zero(1)), &c, &noise).unwrap();
    let half = DensityMatrix::maximally_mixed(1);
    for (a, b) in out.as_slice().iter().zip(half.as_slice()) {
        assert!((a - b).norm() < 1e-15);
    }
}

#[test]
fn repeated_noisy_layers_approach_maximally_mixed() {
    let schedule = PairSchedule::preset(4).unwrap();
    let noise = NoiseModel::new(0.05, 0.2, 0.0).unwrap();
    let mut rng = seeded(5);
    let mut rho = DensityMatrix::from_pure(&StateVector::zero(4));
    let mut last = 1.0;
    for _ in 0..60 {
        let c = schedule.block_circuit(4, Method::Direct, &mut rng).unwrap();
        rho = apply_noisy_circuit(&rho, &c, &noise).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-10);
        let r = purity(&rho).unwrap();
        assert!(r <= last + 1e-12, "purity rose from {last} to {r}");
        last = r;
    }
    assert!((last - 0.0625).abs() < 1e-3, "{last}");
    rho.validate().unwrap();
}

#[test]
fn swap_is_three_noisy_cnots() {
    let noise = NoiseModel::new(0.0, 0.1, 0.0).unwrap();
    let plus = DensityMatrix::from_pure(
        &apply_circuit(&StateVector::zero(2), &Circuit::from_ops(2, [GateOp::ry(0, 1.0)]).unwrap())
            .unwrap(),
    );
    let a = apply_noisy_circuit(&plus, &Circuit::from_ops(2, [GateOp::Swap(0, 1)]).unwrap(), &noise)
        .unwrap();
    let cnots = Circuit::from_ops(2, [GateOp::cnot(0, 1), GateOp::cnot(1, 0), GateOp::cnot(0, 1)])
        .unwrap();
    let b = apply_noisy_circuit(&plus, &cnots, &noise).unwrap();
    assert_eq!(a, b);
}

#[test]
fn readout_without_flips_follows_born_rule() {
    let c = Circuit::from_ops(2, [GateOp::ry(0, 1.1), GateOp::cnot(0, 1), GateOp::ry(1, 0.4)]).unwrap();
    let state = apply_circuit(&StateVector::zero(2), &c).unwrap();
    let counts = noisy_measure(&DensityMatrix::from_pure(&state), &NoiseModel::ideal(), 100_000, &mut seeded(6))
        .unwrap();
    let observed: Vec<u64> =
        ["00", "01", "10", "11"].iter().map(|k| counts.get(*k).copied().unwrap_or(0)).collect();
    assert!(chi_square_p_value(&observed, &state.probabilities()) > 0.01);
}

#[test]
fn readout_flip_rate() {
    let noise = NoiseModel::lagos();
    let shots = 1_000_000u64;
    let counts = noisy_measure(&DensityMatrix::from_pure(&StateVector::zero(1)), &noise, shots, &mut seeded(7))
        .unwrap();
    let f = counts["1"] as f64 / shots as f64;
    let p = 1.0 - 0.9862;
    assert!((f - p).abs() < 3.0 * (p * (1.0 - p) / shots as f64).sqrt(), "{f}");

    let coin = NoiseModel::new(0.0, 0.0, 0.5).unwrap();
    let counts = noisy_measure(&DensityMatrix::from_pure(&StateVector::zero(1)), &coin, shots, &mut seeded(8))
        .unwrap();
    let f = counts["0"] as f64 / shots as f64;
    assert!((f - 0.5).abs() < 3.0 * (0.25 / shots as f64).sqrt());
}

fn device(graph: CouplingGraph, noise: NoiseModel, n: usize) -> Device {
    Device { graph, noise, schedule: PairSchedule::preset(n).unwrap() }
}

#[test]
fn noiseless_benchmark_matches_exact_purities() {
    let dev = device(CouplingGraph::all_to_all(4).unwrap(), NoiseModel::ideal(), 4);
    let budgets = Budgets { ensemble: 2, settings: 200, shots: 10_000 };
    let report = hardware_benchmark(4, Method::Direct, &dev, budgets, SeedStreams::new(9)).unwrap();
    assert_eq!(report.cnot_count, 4);
    for row in &report.rows {
        assert!((row.purity_exact - row.purity_ideal).abs() < 1e-10);
        assert!(
            (row.purity_est - row.purity_exact).abs() < 3.0 * row.std_err,
            "n_a={}: {} vs {} ± {}",
            row.n_a,
            row.purity_est,
            row.purity_exact,
            row.std_err
        );
    }
    assert!((report.whole_state().purity_exact - 1.0).abs() < 1e-10);
}

#[test]
fn lagos_noise_keeps_half_register_purity_above_haar_value() {
    let dev = device(CouplingGraph::lagos7(), NoiseModel::lagos(), 4);
    let budgets = Budgets { ensemble: 100, ..Budgets::default() };
    let report = hardware_benchmark(4, Method::Direct, &dev, budgets, SeedStreams::new(10)).unwrap();
    let haar = to_f64(&exact_mean_purity(BipartitionDims::from_qubits(4, 2).unwrap()));
    assert!(report.row(2).unwrap().purity_est > haar);
    assert!(report.whole_state().purity_est < 1.0);
    assert!(report.whole_state().purity_exact < 1.0);
}

#[test]
fn routing_overhead_costs_purity_under_equal_noise() {
    let budgets = Budgets::default();
    for n in [4, 6] {
        let full = hardware_benchmark(
            n,
            Method::Direct,
            &device(CouplingGraph::all_to_all(7).unwrap(), NoiseModel::lagos(), n),
            budgets,
            SeedStreams::new(11),
        )
        .unwrap();
        let sparse = hardware_benchmark(
            n,
            Method::Direct,
            &device(CouplingGraph::lagos7(), NoiseModel::lagos(), n),
            budgets,
            SeedStreams::new(11),
        )
        .unwrap();
        assert!(full.cnot_count < sparse.cnot_count);
        assert!(full.whole_state().purity_exact > sparse.whole_state().purity_exact);
    }
}

#[test]
fn benchmark_is_deterministic() {
    let dev = device(CouplingGraph::lagos7(), NoiseModel::lagos(), 4);
    let run = || hardware_benchmark(4, Method::Kak, &dev, Budgets::default(), SeedStreams::new(12)).unwrap();
    assert_eq!(run(), run());
}

#[test]
fn noiseless_evolution_stays_pure() {
    let dev = device(CouplingGraph::lagos7(), NoiseModel::ideal(), 4);
    let report = evolution_study(4, Method::Direct, &dev, 6, 3, SeedStreams::new(13)).unwrap();
    assert_eq!(report.rows.len(), 24);
    for p in report.curve(4) {
        assert!((p - 1.0).abs() < 1e-8);
    }
    assert!(evolution_study(4, Method::Direct, &dev, 0, 3, SeedStreams::new(13)).is_err());
}
