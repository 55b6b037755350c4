//! Random-object samplers and the layered pseudo-random state generators.

mod direct;
mod generator;
mod haar;
mod kak;

pub use direct::{
    build_direct_circuit, direct_block_ops, entangling_angle_from_uniform, sample_direct_angles,
    DirectAngles,
};
pub use generator::{
    build_generator_circuit, build_generator_layers, random_block, GeneratorMethod, Method,
};
pub use haar::{exact_random_state, haar_unitary, haar_unitary2, haar_unitary4};
pub use kak::{
    euler_zyz, kak_decompose, phase_distance, two_qubit_circuit_unitary, KakDecomposition,
    RECONSTRUCTION_TOL,
};
