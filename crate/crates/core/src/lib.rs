//! Classical simulation toolkit for pseudo-random multi-qubit states.
//!
//! The crate is split along the lines of the experiment pipeline:
//!
//! * [`simcore`]: dense state-vector and density-matrix simulation, partial
//!   traces, purities and computational-basis sampling.
//! * [`randgen`]: Haar samplers, the one-CNOT random-state block, the KAK
//!   decomposition of two-qubit unitaries and the layered generators.
//! * [`moments`]: exact purity statistics of Haar random states in rational
//!   arithmetic and the ensemble convergence metrics.
//! * [`convergence`]: ensemble studies of the generators against those
//!   statistics.
//! * [`randmeas`]: randomized-measurement purity estimation from shot counts.
//! * [`hardware`]: coupling graphs, SWAP routing, depolarizing and readout
//!   noise, and the benchmark and evolution studies built on top.
//!
//! Qubit 0 is always the most significant bit of a basis-state index, so the
//! bitstring `"01"` is the basis state `|0⟩ ⊗ |1⟩` with qubit 0 on the left.

pub mod convergence;
pub mod error;
pub mod hardware;
pub mod moments;
pub mod randgen;
pub mod randmeas;
pub mod rng;
pub mod simcore;
pub mod stats;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
