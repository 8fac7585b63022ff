//! Directed communication graphs.
//!
//! Processes are identified by ids `1..=n`. An edge `(j, i)` means process `j`
//! can send to process `i`; adjacency is stored as in-neighbour sets since the
//! algorithm and both partition conditions are phrased in terms of incoming
//! links.

mod decompose;
mod format;
mod reduced;
mod vertex_set;

pub use decompose::{decompose, has_universal_root, Decomposition};
pub use format::{parse_graph, GraphFile};
pub use reduced::{
    count_reduced_graphs, count_reduced_graphs_max, enumerate_reduced_graphs, ReducedGraph,
    ReducedGraphs,
};
pub use vertex_set::VertexSet;

pub(crate) use decompose::{reaches_all, source_components};
pub(crate) use format::parse_graph_lines;
pub(crate) use reduced::{binomial, maximal_reduced_in_sets};

use crate::{Error, Result};

/// Process identifier, `1..=n`.
pub type ProcessId = usize;

/// Largest supported process count (vertex sets are 64-bit masks).
pub const MAX_PROCESSES: usize = 64;

/// A simple directed graph without self-loops.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    in_adj: Vec<VertexSet>,
}

impl Digraph {
    /// Edgeless graph on `n` processes.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::usage(format!("a graph needs at least 2 processes, got {n}")));
        }
        if n > MAX_PROCESSES {
            return Err(Error::usage(format!(
                "at most {MAX_PROCESSES} processes are supported, got {n}"
            )));
        }
        Ok(Digraph {
            n,
            in_adj: vec![VertexSet::EMPTY; n],
        })
    }

    /// The complete digraph `K_n`.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Digraph::new(n)?;
        let all = g.vertices();
        for (i, set) in g.in_adj.iter_mut().enumerate() {
            *set = all.without(i + 1);
        }
        Ok(g)
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (ProcessId, ProcessId)>,
    ) -> Result<Self> {
        let mut g = Digraph::new(n)?;
        for (from, to) in edges {
            g.add_edge(from, to)?;
        }
        Ok(g)
    }

    /// Directed cycle `1 -> 2 -> ... -> n -> 1`.
    pub fn cycle(n: usize) -> Result<Self> {
        Digraph::from_edges(n, (1..=n).map(|i| (i, i % n + 1)))
    }

    /// Add `from -> to`. Adding an existing edge is a no-op.
    pub fn add_edge(&mut self, from: ProcessId, to: ProcessId) -> Result<()> {
        self.check_id(from)?;
        self.check_id(to)?;
        if from == to {
            return Err(Error::usage(format!("self-loop on process {from}")));
        }
        self.in_adj[to - 1].insert(from);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn has_edge(&self, from: ProcessId, to: ProcessId) -> bool {
        (1..=self.n).contains(&to) && self.in_adj[to - 1].contains(from)
    }

    /// `N_v^-`: processes with an edge into `v`.
    pub fn in_neighbors(&self, v: ProcessId) -> Result<VertexSet> {
        self.check_id(v)?;
        Ok(self.in_adj[v - 1])
    }

    /// `N_v^+`: processes `v` has an edge into.
    pub fn out_neighbors(&self, v: ProcessId) -> Result<VertexSet> {
        self.check_id(v)?;
        Ok(self
            .vertices()
            .iter()
            .filter(|&i| self.in_adj[i - 1].contains(v))
            .collect())
    }

    pub fn in_degree(&self, v: ProcessId) -> Result<usize> {
        self.in_neighbors(v).map(|s| s.len())
    }

    pub fn min_in_degree(&self) -> usize {
        self.in_adj.iter().map(|s| s.len()).min().unwrap_or(0)
    }

    /// All edges `(from, to)` in lexicographic order.
    pub fn edges(&self) -> Vec<(ProcessId, ProcessId)> {
        let mut edges: Vec<_> = (1..=self.n)
            .flat_map(|to| self.in_adj[to - 1].iter().map(move |from| (from, to)))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn edge_count(&self) -> usize {
        self.in_adj.iter().map(|s| s.len()).sum()
    }

    pub(crate) fn in_sets(&self) -> &[VertexSet] {
        &self.in_adj
    }

    pub(crate) fn check_id(&self, v: ProcessId) -> Result<()> {
        if (1..=self.n).contains(&v) {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "process id {v} outside 1..={}",
                self.n
            )))
        }
    }

    pub(crate) fn check_set(&self, set: VertexSet) -> Result<()> {
        if set.is_subset(self.vertices()) {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "vertex set {set} is not contained in 1..={}",
                self.n
            )))
        }
    }
}
