//! Hardware emulation: coupling graphs, routing, depolarizing and readout
//! noise, and the scheduled benchmark and evolution experiments.

mod experiments;
mod graph;
mod noise;
mod noisy;
mod routing;

pub use experiments::{
    evolution_study, hardware_benchmark, BenchmarkReport, BenchmarkRow, Budgets, Device,
    EvolutionReport, EvolutionRow, PairSchedule,
};
pub use graph::CouplingGraph;
pub use noise::{apply_readout_flips, noisy_measure, NoiseModel};
pub use noisy::{apply_noisy_circuit, evolve_noisy};
pub use routing::{cnot_count, compact_circuit, route_circuit, used_qubits, RoutedCircuit, Router};
