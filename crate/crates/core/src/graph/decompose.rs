//! Strongly connected components, condensation and source components.

use super::{Digraph, ProcessId, VertexSet};

/// SCC decomposition of a graph.
///
/// Components are ordered by their smallest member; `condensation_edges`
/// holds `(from_component, to_component)` pairs in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub components: Vec<VertexSet>,
    pub condensation_edges: Vec<(usize, usize)>,
    pub source_indices: Vec<usize>,
}

impl Decomposition {
    pub fn source_count(&self) -> usize {
        self.source_indices.len()
    }

    pub fn sources(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.source_indices.iter().map(|&k| self.components[k])
    }

    /// Index of the component containing `v`.
    pub fn component_of(&self, v: ProcessId) -> Option<usize> {
        self.components.iter().position(|c| c.contains(v))
    }
}

pub fn decompose(g: &Digraph) -> Decomposition {
    decompose_sub(g.vertices(), g.in_sets())
}

/// True iff some vertex has a directed path to every other vertex.
///
/// Computed twice, once by forward reachability from every vertex and once as
/// "exactly one source component"; the two must agree.
pub fn has_universal_root(g: &Digraph) -> bool {
    let by_reach = reaches_all(g.vertices(), g.in_sets());
    let by_sources = decompose(g).source_count() == 1;
    assert_eq!(
        by_reach, by_sources,
        "reachability and source-component counts disagree"
    );
    by_reach
}

/// Decompose the subgraph induced on `vertices`, with `in_adj[v-1]` the
/// in-neighbours of `v` (entries outside `vertices` are ignored).
pub(crate) fn decompose_sub(vertices: VertexSet, in_adj: &[VertexSet]) -> Decomposition {
    let out_adj = out_sets(vertices, in_adj);
    let mut tarjan = Tarjan {
        out_adj: &out_adj,
        index: vec![usize::MAX; in_adj.len()],
        lowlink: vec![0; in_adj.len()],
        on_stack: VertexSet::EMPTY,
        stack: Vec::new(),
        next_index: 0,
        components: Vec::new(),
    };
    for v in vertices {
        if tarjan.index[v - 1] == usize::MAX {
            tarjan.visit(v);
        }
    }
    let mut components = tarjan.components;
    components.sort_by_key(|c| c.first());

    let mut component_of = vec![usize::MAX; in_adj.len()];
    for (k, c) in components.iter().enumerate() {
        for v in c.iter() {
            component_of[v - 1] = k;
        }
    }
    let mut condensation_edges = Vec::new();
    for to in vertices {
        for from in in_adj[to - 1].intersection(vertices) {
            let (a, b) = (component_of[from - 1], component_of[to - 1]);
            if a != b {
                condensation_edges.push((a, b));
            }
        }
    }
    condensation_edges.sort_unstable();
    condensation_edges.dedup();

    let mut has_incoming = vec![false; components.len()];
    for &(_, b) in &condensation_edges {
        has_incoming[b] = true;
    }
    let source_indices = (0..components.len()).filter(|&k| !has_incoming[k]).collect();
    Decomposition {
        components,
        condensation_edges,
        source_indices,
    }
}

/// Source components of the induced subgraph.
pub(crate) fn source_components(vertices: VertexSet, in_adj: &[VertexSet]) -> Vec<VertexSet> {
    let d = decompose_sub(vertices, in_adj);
    d.sources().collect()
}

/// Whether some vertex of the induced subgraph reaches all of `vertices`.
/// An empty or single-vertex subgraph trivially qualifies.
pub(crate) fn reaches_all(vertices: VertexSet, in_adj: &[VertexSet]) -> bool {
    if vertices.len() <= 1 {
        return true;
    }
    let out_adj = out_sets(vertices, in_adj);
    vertices.iter().any(|root| {
        let mut seen = VertexSet::singleton(root);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next = next.union(out_adj[v - 1]);
            }
            frontier = next.difference(seen);
            seen = seen.union(next);
        }
        seen == vertices
    })
}

fn out_sets(vertices: VertexSet, in_adj: &[VertexSet]) -> Vec<VertexSet> {
    let mut out = vec![VertexSet::EMPTY; in_adj.len()];
    for to in vertices {
        for from in in_adj[to - 1].intersection(vertices) {
            out[from - 1].insert(to);
        }
    }
    out
}

struct Tarjan<'a> {
    out_adj: &'a [VertexSet],
    index: Vec<usize>,
    lowlink: Vec<usize>,
    on_stack: VertexSet,
    stack: Vec<ProcessId>,
    next_index: usize,
    components: Vec<VertexSet>,
}

impl Tarjan<'_> {
    // Recursion depth is bounded by the vertex count (at most 64).
    fn visit(&mut self, v: ProcessId) {
        self.index[v - 1] = self.next_index;
        self.lowlink[v - 1] = self.next_index;
        self.next_index += 1;
        self.stack.push(v);
        self.on_stack.insert(v);

        for w in self.out_adj[v - 1] {
            if self.index[w - 1] == usize::MAX {
                self.visit(w);
                self.lowlink[v - 1] = self.lowlink[v - 1].min(self.lowlink[w - 1]);
            } else if self.on_stack.contains(w) {
                self.lowlink[v - 1] = self.lowlink[v - 1].min(self.index[w - 1]);
            }
        }

        if self.lowlink[v - 1] == self.index[v - 1] {
            let mut component = VertexSet::EMPTY;
            loop {
                let w = self.stack.pop().expect("tarjan stack underflow");
                self.on_stack.remove(w);
                component.insert(w);
                if w == v {
                    break;
                }
            }
            self.components.push(component);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(ids: &[usize]) -> VertexSet {
        VertexSet::from_ids(ids.iter().copied())
    }

    /// Brute-force reachability closure: reach[v] = vertices reachable from v.
    fn closure(g: &Digraph) -> Vec<VertexSet> {
        let n = g.n();
        let mut reach: Vec<VertexSet> = (1..=n).map(VertexSet::singleton).collect();
        for (from, to) in g.edges() {
            reach[from - 1].insert(to);
        }
        for k in 1..=n {
            for i in 0..n {
                if reach[i].contains(k) {
                    reach[i] = reach[i].union(reach[k - 1]);
                }
            }
        }
        reach
    }

    #[test]
    fn cycle_is_one_source_component() {
        let d = decompose(&Digraph::cycle(3).unwrap());
        assert_eq!(d.components, vec![set(&[1, 2, 3])]);
        assert_eq!(d.source_indices, vec![0]);
        assert!(d.condensation_edges.is_empty());
    }

    #[test]
    fn single_edge() {
        let d = decompose(&Digraph::from_edges(2, [(1, 2)]).unwrap());
        assert_eq!(d.components, vec![set(&[1]), set(&[2])]);
        assert_eq!(d.condensation_edges, vec![(0, 1)]);
        assert_eq!(d.sources().collect::<Vec<_>>(), vec![set(&[1])]);
    }

    #[test]
    fn two_sources_into_a_sink() {
        let g = Digraph::from_edges(3, [(1, 2), (3, 2)]).unwrap();
        let d = decompose(&g);
        assert_eq!(d.components.len(), 3);
        assert_eq!(d.sources().collect::<Vec<_>>(), vec![set(&[1]), set(&[3])]);
        // brute force: no vertex reaches everything
        assert!(closure(&g).iter().all(|r| r.len() < 3));
        assert!(!has_universal_root(&g));
    }

    #[test]
    fn universal_root_examples() {
        assert!(has_universal_root(&Digraph::cycle(3).unwrap()));
        assert!(reaches_all(VertexSet::singleton(2), &[VertexSet::EMPTY; 3]));
        assert!(reaches_all(VertexSet::EMPTY, &[]));
    }

    fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
        (2..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let mut g = Digraph::new(n).unwrap();
                for i in 1..=n {
                    for j in 1..=n {
                        if i != j && bits[(i - 1) * n + (j - 1)] {
                            g.add_edge(i, j).unwrap();
                        }
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn decomposition_is_a_partition_with_acyclic_condensation(g in arb_digraph(7)) {
            let d = decompose(&g);
            let mut union = VertexSet::EMPTY;
            for c in &d.components {
                prop_assert!(!c.is_empty());
                prop_assert!(c.is_disjoint(union));
                union = union.union(*c);
            }
            prop_assert_eq!(union, g.vertices());
            // components sorted by smallest id
            let mins: Vec<_> = d.components.iter().map(|c| c.first().unwrap()).collect();
            prop_assert!(mins.windows(2).all(|w| w[0] < w[1]));
            // condensation acyclic: Kahn's algorithm consumes every node
            let k = d.components.len();
            let mut indeg = vec![0usize; k];
            for &(_, b) in &d.condensation_edges { indeg[b] += 1; }
            let mut ready: Vec<usize> = (0..k).filter(|&c| indeg[c] == 0).collect();
            let mut seen = 0;
            while let Some(c) = ready.pop() {
                seen += 1;
                for &(a, b) in &d.condensation_edges {
                    if a == c { indeg[b] -= 1; if indeg[b] == 0 { ready.push(b); } }
                }
            }
            prop_assert_eq!(seen, k);
            // components agree with mutual reachability
            let reach = closure(&g);
            for c in &d.components {
                let v = c.first().unwrap();
                let mutual: VertexSet = g.vertices().iter()
                    .filter(|&u| reach[v - 1].contains(u) && reach[u - 1].contains(v))
                    .collect();
                prop_assert_eq!(*c, mutual);
            }
        }

        #[test]
        fn universal_root_iff_single_source(g in arb_digraph(7)) {
            let reach = closure(&g);
            let brute = reach.iter().any(|r| *r == g.vertices());
            prop_assert_eq!(has_universal_root(&g), brute);
            prop_assert_eq!(decompose(&g).source_count() == 1, brute);
        }
    }
}
