use std::collections::{BTreeSet, VecDeque};

use crate::{Error, Result};

/// Undirected, connected qubit coupling graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    n_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl CouplingGraph {
    pub fn new(n_qubits: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("a coupling graph needs at least one qubit".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for q in [a, b] {
                if q >= n_qubits {
                    return Err(Error::QubitOutOfRange { index: q, n_qubits });
                }
            }
            if a == b {
                return Err(Error::RepeatedQubit(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![Vec::new(); n_qubits];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        adjacency.iter_mut().for_each(|v| v.sort_unstable());
        let graph = Self { n_qubits, edges: set, adjacency };
        if graph.shortest_paths_from(0).iter().any(Option::is_none) {
            return Err(Error::DisconnectedGraph);
        }
        Ok(graph)
    }

    pub fn all_to_all(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, (0..n_qubits).flat_map(|a| (a + 1..n_qubits).map(move |b| (a, b))))
    }

    pub fn line(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, (1..n_qubits).map(|b| (b - 1, b)))
    }

    /// The 7-qubit H-shaped heavy-hex fragment.
    pub fn lagos7() -> Self {
        Self::new(7, [(0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6)]).expect("static preset")
    }

    /// `"all_to_all:n"`, `"line:n"`, `"lagos7"` or `"harmony11"`.
    pub fn preset(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownPreset(name.to_string());
        match name {
            "lagos7" => return Ok(Self::lagos7()),
            "harmony11" => return Self::all_to_all(11),
            _ => {}
        }
        let (kind, size) = name.split_once(':').ok_or_else(unknown)?;
        let n: usize = size.parse().map_err(|_| unknown())?;
        match kind {
            "all_to_all" => Self::all_to_all(n),
            "line" => Self::line(n),
            _ => Err(unknown()),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Edges as `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    /// BFS predecessor table from `source`.
    fn shortest_paths_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.n_qubits];
        parent[source] = Some(source);
        let mut queue = VecDeque::from([source]);
        while let Some(q) = queue.pop_front() {
            for &nb in &self.adjacency[q] {
                if parent[nb].is_none() {
                    parent[nb] = Some(q);
                    queue.push_back(nb);
                }
            }
        }
        parent
    }

    /// A shortest path `from → to` inclusive. Ties go to the path whose
    /// vertices, read from `to` backwards, are discovered first by a BFS
    /// visiting neighbors in ascending order.
    pub fn shortest_path(&self, from: usize, to: usize) -> Result<Vec<usize>> {
        for q in [from, to] {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits: self.n_qubits });
            }
        }
        let parent = self.shortest_paths_from(from);
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur].ok_or(Error::DisconnectedGraph)?;
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }

    pub fn distance(&self, a: usize, b: usize) -> Result<usize> {
        Ok(self.shortest_path(a, b)?.len() - 1)
    }
}
