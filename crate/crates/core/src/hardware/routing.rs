use std::collections::BTreeSet;

use super::graph::CouplingGraph;
use crate::simcore::{Circuit, GateOp};
use crate::{Error, Result};

/// CNOT cost of a circuit as executed on hardware: a SWAP is three CNOTs
/// and a generic two-qubit unitary compiles to three.
pub fn cnot_count(circuit: &Circuit) -> usize {
    circuit
        .ops()
        .iter()
        .map(|op| match op {
            GateOp::Cnot { .. } => 1,
            GateOp::Swap(..) | GateOp::TwoQubitUnitary { .. } => 3,
            GateOp::Rotation { .. } | GateOp::Permutation(_) => 0,
        })
        .sum()
}

fn swap_as_cnots(a: usize, b: usize) -> [GateOp; 3] {
    [GateOp::cnot(a, b), GateOp::cnot(b, a), GateOp::cnot(a, b)]
}

/// Greedy shortest-path router. The logical-to-physical layout persists
/// across calls to [`Router::route`], so consecutive circuit segments can be
/// routed one at a time.
#[derive(Debug, Clone)]
pub struct Router<'g> {
    graph: &'g CouplingGraph,
    n_logical: usize,
    layout: Vec<usize>,
    occupant: Vec<Option<usize>>,
}

impl<'g> Router<'g> {
    /// Identity placement: logical qubit `i` starts on physical qubit `i`.
    pub fn new(graph: &'g CouplingGraph, n_logical: usize) -> Result<Self> {
        if n_logical > graph.n_qubits() {
            return Err(Error::SizeMismatch { expected: graph.n_qubits(), found: n_logical });
        }
        let occupant = (0..graph.n_qubits()).map(|p| (p < n_logical).then_some(p)).collect();
        Ok(Self { graph, n_logical, layout: (0..n_logical).collect(), occupant })
    }

    /// `layout()[l]` is the physical qubit currently holding logical `l`.
    pub fn layout(&self) -> &[usize] {
        &self.layout
    }

    fn swap_physical(&mut self, a: usize, b: usize, out: &mut Circuit) -> Result<()> {
        for op in swap_as_cnots(a, b) {
            out.push(op)?;
        }
        self.occupant.swap(a, b);
        for p in [a, b] {
            if let Some(l) = self.occupant[p] {
                self.layout[l] = p;
            }
        }
        Ok(())
    }

    /// Moves logical `a` along a shortest path until it neighbors logical
    /// `b`; returns their physical positions.
    fn bring_adjacent(&mut self, a: usize, b: usize, out: &mut Circuit) -> Result<(usize, usize)> {
        let path = self.graph.shortest_path(self.layout[a], self.layout[b])?;
        for w in path.windows(2).take(path.len().saturating_sub(2)) {
            self.swap_physical(w[0], w[1], out)?;
        }
        Ok((self.layout[a], self.layout[b]))
    }

    /// Routes one segment; the result acts on the full physical register.
    pub fn route(&mut self, circuit: &Circuit) -> Result<Circuit> {
        if circuit.n_qubits() != self.n_logical {
            return Err(Error::SizeMismatch { expected: self.n_logical, found: circuit.n_qubits() });
        }
        let mut out = Circuit::new(self.graph.n_qubits());
        for op in circuit.ops() {
            match op {
                GateOp::Rotation { axis, angle, target } => out.push(GateOp::Rotation {
                    axis: *axis,
                    angle: *angle,
                    target: self.layout[*target],
                })?,
                GateOp::Cnot { control, target } => {
                    let (c, t) = self.bring_adjacent(*control, *target, &mut out)?;
                    out.push(GateOp::cnot(c, t))?;
                }
                GateOp::TwoQubitUnitary { matrix, qubits } => {
                    let (a, b) = self.bring_adjacent(qubits[0], qubits[1], &mut out)?;
                    out.push(GateOp::two_qubit(**matrix, a, b))?;
                }
                GateOp::Swap(x, y) => {
                    let (a, b) = self.bring_adjacent(*x, *y, &mut out)?;
                    for op in swap_as_cnots(a, b) {
                        out.push(op)?;
                    }
                }
                GateOp::Permutation(_) => return Err(Error::PermutationInRouting),
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutedCircuit {
    /// Ops on the physical register; every two-qubit op sits on an edge.
    pub circuit: Circuit,
    /// Physical position of each logical qubit after the circuit.
    pub final_layout: Vec<usize>,
}

/// Routes a whole circuit from the identity placement.
pub fn route_circuit(circuit: &Circuit, graph: &CouplingGraph) -> Result<RoutedCircuit> {
    let mut router = Router::new(graph, circuit.n_qubits())?;
    let routed = router.route(circuit)?;
    Ok(RoutedCircuit { circuit: routed, final_layout: router.layout().to_vec() })
}

/// Physical qubits touched by `circuits` plus `0..n_logical`, ascending.
pub fn used_qubits(circuits: &[Circuit], n_logical: usize) -> Vec<usize> {
    let mut used: BTreeSet<usize> = (0..n_logical).collect();
    for c in circuits {
        for op in c.ops() {
            used.extend(op.qubits());
        }
    }
    used.into_iter().collect()
}

/// Re-expresses a circuit on the compact register `used` (qubit `used[i]`
/// becomes `i`).
pub fn compact_circuit(circuit: &Circuit, used: &[usize]) -> Result<Circuit> {
    let index = |q: usize| {
        used.binary_search(&q).map_err(|_| Error::QubitOutOfRange { index: q, n_qubits: used.len() })
    };
    let mut out = Circuit::new(used.len());
    for op in circuit.ops() {
        let mapped = match op {
            GateOp::Rotation { axis, angle, target } => {
                GateOp::Rotation { axis: *axis, angle: *angle, target: index(*target)? }
            }
            GateOp::Cnot { control, target } => GateOp::cnot(index(*control)?, index(*target)?),
            GateOp::Swap(a, b) => GateOp::Swap(index(*a)?, index(*b)?),
            GateOp::TwoQubitUnitary { matrix, qubits } => {
                GateOp::two_qubit(**matrix, index(qubits[0])?, index(qubits[1])?)
            }
            GateOp::Permutation(_) => return Err(Error::PermutationInRouting),
        };
        out.push(mapped)?;
    }
    Ok(out)
}
