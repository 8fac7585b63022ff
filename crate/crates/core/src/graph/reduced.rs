//! Reduced graphs: delete a fault set `F`, then up to `d*f` further incoming
//! links at every surviving process.

use itertools::Itertools;
use num::{BigUint, One};

use super::decompose::{decompose_sub, reaches_all};
use super::{Decomposition, Digraph, ProcessId, VertexSet};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGraph {
    base: Digraph,
    fault_set: VertexSet,
    /// `removed[v-1]`: extra in-neighbours of `v` whose links were deleted.
    removed: Vec<VertexSet>,
}

impl ReducedGraph {
    /// Build and validate a reduced graph against the budget `d*f`.
    pub fn new(
        base: Digraph,
        fault_set: VertexSet,
        removed: impl IntoIterator<Item = (ProcessId, VertexSet)>,
        d: usize,
        f: usize,
    ) -> Result<Self> {
        check_fault_set(&base, fault_set, f)?;
        let mut sets = vec![VertexSet::EMPTY; base.n()];
        for (v, links) in removed {
            base.check_id(v)?;
            if fault_set.contains(v) {
                return Err(Error::usage(format!("process {v} is in the fault set")));
            }
            let available = base.in_sets()[v - 1].difference(fault_set);
            if !links.is_subset(available) {
                return Err(Error::usage(format!(
                    "links {links} into {v} are not surviving incoming links"
                )));
            }
            sets[v - 1] = sets[v - 1].union(links);
        }
        if let Some(v) = (1..=base.n()).find(|&v| sets[v - 1].len() > d * f) {
            return Err(Error::usage(format!(
                "more than d*f = {} links removed at process {v}",
                d * f
            )));
        }
        Ok(ReducedGraph {
            base,
            fault_set,
            removed: sets,
        })
    }

    pub fn base(&self) -> &Digraph {
        &self.base
    }

    pub fn fault_set(&self) -> VertexSet {
        self.fault_set
    }

    /// `V - F`.
    pub fn vertices(&self) -> VertexSet {
        self.base.vertices().difference(self.fault_set)
    }

    /// Extra links removed at `v` (beyond those incident on `F`).
    pub fn removed_links(&self, v: ProcessId) -> VertexSet {
        self.removed.get(v.wrapping_sub(1)).copied().unwrap_or_default()
    }

    /// Surviving in-neighbours of `v`; empty for faulty or unknown ids.
    pub fn in_neighbors(&self, v: ProcessId) -> VertexSet {
        if !self.vertices().contains(v) {
            return VertexSet::EMPTY;
        }
        self.base.in_sets()[v - 1]
            .difference(self.fault_set)
            .difference(self.removed[v - 1])
    }

    pub fn has_edge(&self, from: ProcessId, to: ProcessId) -> bool {
        self.in_neighbors(to).contains(from)
    }

    pub fn edges(&self) -> Vec<(ProcessId, ProcessId)> {
        let mut edges: Vec<_> = self
            .vertices()
            .iter()
            .flat_map(|to| self.in_neighbors(to).iter().map(move |from| (from, to)))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn decompose(&self) -> Decomposition {
        decompose_sub(self.vertices(), &self.in_sets())
    }

    pub fn has_universal_root(&self) -> bool {
        reaches_all(self.vertices(), &self.in_sets())
    }

    fn in_sets(&self) -> Vec<VertexSet> {
        (1..=self.base.n()).map(|v| self.in_neighbors(v)).collect()
    }
}

fn check_fault_set(g: &Digraph, fault_set: VertexSet, f: usize) -> Result<()> {
    g.check_set(fault_set)?;
    if fault_set.len() > f {
        return Err(Error::usage(format!(
            "fault set {fault_set} has more than f = {f} processes"
        )));
    }
    if fault_set == g.vertices() {
        return Err(Error::usage("fault set cannot contain every process"));
    }
    Ok(())
}

/// Every reduced graph of `g` for fault set `fault_set`, each exactly once.
///
/// Order: odometer over surviving vertices (smallest id most significant);
/// per vertex the removal sets are ordered by their sorted id lists.
pub fn enumerate_reduced_graphs(
    g: &Digraph,
    fault_set: VertexSet,
    d: usize,
    f: usize,
) -> Result<ReducedGraphs> {
    check_fault_set(g, fault_set, f)?;
    let survivors: Vec<ProcessId> = g.vertices().difference(fault_set).iter().collect();
    let choices = survivors
        .iter()
        .map(|&v| removal_choices(g.in_sets()[v - 1].difference(fault_set), d * f))
        .collect();
    Ok(ReducedGraphs {
        base: g.clone(),
        fault_set,
        survivors,
        choices,
        odometer: Some(Vec::new()),
    })
}

fn removal_choices(available: VertexSet, budget: usize) -> Vec<VertexSet> {
    let ids: Vec<ProcessId> = available.iter().collect();
    let mut lists: Vec<Vec<ProcessId>> = (0..=budget.min(ids.len()))
        .flat_map(|k| ids.iter().copied().combinations(k))
        .collect();
    lists.sort();
    lists.into_iter().map(VertexSet::from_ids).collect()
}

/// Iterator returned by [`enumerate_reduced_graphs`].
pub struct ReducedGraphs {
    base: Digraph,
    fault_set: VertexSet,
    survivors: Vec<ProcessId>,
    choices: Vec<Vec<VertexSet>>,
    /// `None` once exhausted; empty before the first item.
    odometer: Option<Vec<usize>>,
}

impl Iterator for ReducedGraphs {
    type Item = ReducedGraph;

    fn next(&mut self) -> Option<ReducedGraph> {
        let odometer = self.odometer.as_mut()?;
        if odometer.is_empty() {
            odometer.resize(self.survivors.len(), 0);
        } else if !advance(odometer, &self.choices) {
            self.odometer = None;
            return None;
        }
        let mut removed = vec![VertexSet::EMPTY; self.base.n()];
        for (k, &v) in self.survivors.iter().enumerate() {
            removed[v - 1] = self.choices[k][odometer[k]];
        }
        Some(ReducedGraph {
            base: self.base.clone(),
            fault_set: self.fault_set,
            removed,
        })
    }
}

/// Increment a mixed-radix counter, last digit fastest. False on wrap-around.
fn advance(digits: &mut [usize], choices: &[Vec<VertexSet>]) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < choices[k].len() {
            return true;
        }
        digits[k] = 0;
    }
    false
}

/// `|R_F|` by the closed-form product `prod_v sum_{k<=min(df,a_v)} C(a_v, k)`.
///
/// Distinct removal tuples give distinct surviving edge sets, so this equals
/// the number of items produced by [`enumerate_reduced_graphs`].
pub fn count_reduced_graphs(
    g: &Digraph,
    fault_set: VertexSet,
    d: usize,
    f: usize,
) -> Result<BigUint> {
    check_fault_set(g, fault_set, f)?;
    Ok(count_for(g, fault_set, d * f))
}

fn count_for(g: &Digraph, fault_set: VertexSet, budget: usize) -> BigUint {
    g.vertices()
        .difference(fault_set)
        .iter()
        .map(|v| {
            let a = g.in_sets()[v - 1].difference(fault_set).len();
            (0..=budget.min(a)).map(|k| binomial(a, k)).sum::<BigUint>()
        })
        .product()
}

/// `r`: the maximum of `|R_F|` over every fault set with `|F| <= f`.
pub fn count_reduced_graphs_max(g: &Digraph, d: usize, f: usize) -> BigUint {
    let ids: Vec<ProcessId> = g.vertices().iter().collect();
    let mut best = BigUint::one();
    for size in 0..=f.min(g.n() - 1) {
        for faults in ids.iter().copied().combinations(size) {
            let count = count_for(g, VertexSet::from_ids(faults), d * f);
            if count > best {
                best = count;
            }
        }
    }
    best
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// In-neighbour tables of the reduced graphs that remove exactly
/// `min(d*f, a_v)` links at every survivor.
///
/// Deleting links never creates reachability, so every reduced graph has a
/// universal root iff these maximal ones do.
pub(crate) fn maximal_reduced_in_sets(
    g: &Digraph,
    fault_set: VertexSet,
    budget: usize,
) -> impl Iterator<Item = Vec<VertexSet>> + '_ {
    let survivors: Vec<ProcessId> = g.vertices().difference(fault_set).iter().collect();
    let keep: Vec<Vec<VertexSet>> = survivors
        .iter()
        .map(|&v| {
            let available: Vec<ProcessId> =
                g.in_sets()[v - 1].difference(fault_set).iter().collect();
            let keep_count = available.len().saturating_sub(budget);
            available
                .iter()
                .copied()
                .combinations(keep_count)
                .map(VertexSet::from_ids)
                .collect()
        })
        .collect();
    let n = g.n();
    let mut odometer: Option<Vec<usize>> = Some(vec![0; survivors.len()]);
    std::iter::from_fn(move || {
        let digits = odometer.as_mut()?;
        let mut in_sets = vec![VertexSet::EMPTY; n];
        for (k, &v) in survivors.iter().enumerate() {
            in_sets[v - 1] = keep[k][digits[k]];
        }
        if !advance(digits, &keep) {
            odometer = None;
        }
        Some(in_sets)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[usize]) -> VertexSet {
        VertexSet::from_ids(ids.iter().copied())
    }

    #[test]
    fn k3_with_one_fault() {
        let k3 = Digraph::complete(3).unwrap();
        let all: Vec<_> = enumerate_reduced_graphs(&k3, set(&[3]), 1, 1).unwrap().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(count_reduced_graphs(&k3, set(&[3]), 1, 1).unwrap(), 4u32.into());
        // lexicographic: vertex 1 slowest
        let firsts: Vec<_> = all.iter().map(|h| (h.removed_links(1), h.removed_links(2))).collect();
        assert_eq!(
            firsts,
            vec![
                (set(&[]), set(&[])),
                (set(&[]), set(&[1])),
                (set(&[2]), set(&[])),
                (set(&[2]), set(&[1])),
            ]
        );
    }

    #[test]
    fn zero_budget_yields_graph_itself() {
        let g = Digraph::from_edges(4, [(1, 2), (2, 3), (4, 1)]).unwrap();
        let all: Vec<_> = enumerate_reduced_graphs(&g, VertexSet::EMPTY, 1, 0)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].edges(), g.edges());
    }

    #[test]
    fn k4_with_one_fault() {
        let k4 = Digraph::complete(4).unwrap();
        assert_eq!(enumerate_reduced_graphs(&k4, set(&[4]), 1, 1).unwrap().count(), 27);
    }

    #[test]
    fn maximum_counts() {
        assert_eq!(count_reduced_graphs_max(&Digraph::complete(3).unwrap(), 1, 1), 27u32.into());
        assert_eq!(count_reduced_graphs_max(&Digraph::complete(4).unwrap(), 1, 1), 256u32.into());
        assert_eq!(count_reduced_graphs_max(&Digraph::complete(4).unwrap(), 2, 0), 1u32.into());
    }

    #[test]
    fn rejects_oversized_fault_sets() {
        let k4 = Digraph::complete(4).unwrap();
        assert!(matches!(
            enumerate_reduced_graphs(&k4, set(&[1, 2]), 1, 1),
            Err(Error::Usage(_))
        ));
        assert!(enumerate_reduced_graphs(&k4, set(&[5]), 1, 1).is_err());
    }

    #[test]
    fn constructor_validates_invariants() {
        let k4 = Digraph::complete(4).unwrap();
        assert!(ReducedGraph::new(k4.clone(), set(&[4]), [(1, set(&[2]))], 1, 1).is_ok());
        assert!(ReducedGraph::new(k4.clone(), set(&[4]), [(1, set(&[2, 3]))], 1, 1).is_err());
        assert!(ReducedGraph::new(k4.clone(), set(&[4]), [(1, set(&[4]))], 1, 1).is_err());
        assert!(ReducedGraph::new(k4, set(&[4]), [(4, set(&[1]))], 1, 1).is_err());
    }

    #[test]
    fn enumerated_graphs_respect_the_definition() {
        let g = Digraph::from_edges(4, [(1, 2), (2, 1), (3, 1), (3, 2), (4, 3), (1, 4), (2, 4)])
            .unwrap();
        for faults in [set(&[]), set(&[3]), set(&[1])] {
            let mut seen = std::collections::HashSet::new();
            for h in enumerate_reduced_graphs(&g, faults, 1, 1).unwrap() {
                assert_eq!(h.vertices(), g.vertices().difference(faults));
                for (from, to) in h.edges() {
                    assert!(!faults.contains(from) && !faults.contains(to));
                    assert!(g.has_edge(from, to));
                }
                for v in h.vertices() {
                    assert!(h.removed_links(v).len() <= 1);
                }
                assert!(seen.insert(h.edges()), "duplicate surviving edge set");
            }
            assert_eq!(
                BigUint::from(seen.len()),
                count_reduced_graphs(&g, faults, 1, 1).unwrap()
            );
        }
    }

    #[test]
    fn maximal_removals_decide_universal_roots() {
        let g = Digraph::complete(4).unwrap();
        for faults in [set(&[]), set(&[2])] {
            let all_ok = enumerate_reduced_graphs(&g, faults, 1, 1)
                .unwrap()
                .all(|h| h.has_universal_root());
            let maximal_ok = maximal_reduced_in_sets(&g, faults, 1)
                .all(|sets| reaches_all(g.vertices().difference(faults), &sets));
            assert_eq!(all_ok, maximal_ok);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 4), 15u32.into());
        assert_eq!(binomial(5, 3), 10u32.into());
        assert_eq!(binomial(3, 5), 0u32.into());
    }
}
