//! Certification of the partition conditions NC (necessary) and SC
//! (sufficient) by exhaustive enumeration, plus the population and in-degree
//! bounds they imply.
//!
//! Notation: `A =>^c B` holds iff some `v` in `B` has at least `c + 1`
//! in-neighbours in `A`.
//!
//! Canonical enumeration order (it decides which witness is reported):
//!
//! * NC: ascending `p`; then fault sets `F` by size, then lexicographically;
//!   then `C` likewise among the rest; then the blocks `V_0..V_p` of the
//!   remainder as restricted growth strings (blocks ordered by smallest id).
//! * SC: fault sets as above; then a base-3 odometer over the remaining ids
//!   (smallest id most significant) assigning `L < C < R`, keeping only
//!   assignments with `L`, `R` non-empty and `min L < min R`.

use std::fmt;
use std::ops::ControlFlow;

use itertools::Itertools;
use num::BigUint;

use crate::graph::{
    binomial, maximal_reduced_in_sets, reaches_all, source_components, Digraph,
    ProcessId, VertexSet,
};
use crate::report::TextReport;
use crate::{Error, Result};

/// Default limit on partitions (or reduced graphs) examined per check.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConditionKind {
    Nc,
    Sc,
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionKind::Nc => "NC",
            ConditionKind::Sc => "SC",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    /// The work budget ran out before a decision was reached.
    NotEvaluated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::NotEvaluated => "not-evaluated",
        })
    }
}

/// A partition of the vertex set on which a condition is tested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionWitness {
    /// `V_0, ..., V_p, C, F`.
    Nc {
        parts: Vec<VertexSet>,
        c: VertexSet,
        f: VertexSet,
    },
    /// `F, L, C, R`.
    Sc {
        f: VertexSet,
        l: VertexSet,
        c: VertexSet,
        r: VertexSet,
    },
}

impl PartitionWitness {
    pub fn kind(&self) -> ConditionKind {
        match self {
            PartitionWitness::Nc { .. } => ConditionKind::Nc,
            PartitionWitness::Sc { .. } => ConditionKind::Sc,
        }
    }

    pub fn fault_set(&self) -> VertexSet {
        match self {
            PartitionWitness::Nc { f, .. } | PartitionWitness::Sc { f, .. } => *f,
        }
    }

    fn all_parts(&self) -> Vec<VertexSet> {
        match self {
            PartitionWitness::Nc { parts, c, f } => {
                let mut all = parts.clone();
                all.extend([*c, *f]);
                all
            }
            PartitionWitness::Sc { f, l, c, r } => vec![*f, *l, *c, *r],
        }
    }

    /// Whether this is a legal partition for its condition on `g`.
    pub fn is_admissible(&self, g: &Digraph, d: usize, f: usize) -> bool {
        let parts = self.all_parts();
        let mut seen = VertexSet::EMPTY;
        for part in &parts {
            if !part.is_disjoint(seen) {
                return false;
            }
            seen = seen.union(*part);
        }
        if seen != g.vertices() || self.fault_set().len() > f {
            return false;
        }
        match self {
            PartitionWitness::Nc { parts, .. } => {
                (2..=d + 1).contains(&parts.len()) && parts.iter().all(|p| !p.is_empty())
            }
            PartitionWitness::Sc { l, r, .. } => !l.is_empty() && !r.is_empty(),
        }
    }

    /// Direct evaluation: true iff this partition is admissible and the
    /// condition's requirement fails on it.
    pub fn violates(&self, g: &Digraph, d: usize, f: usize) -> bool {
        if !self.is_admissible(g, d, f) {
            return false;
        }
        // Counts edges one by one; deliberately independent of the mask-based
        // evaluation used during enumeration.
        let absorbs = |from: VertexSet, into: VertexSet, c: usize| {
            into.iter().any(|v| {
                let incoming = g
                    .edges()
                    .into_iter()
                    .filter(|&(a, b)| b == v && from.contains(a))
                    .count();
                incoming > c
            })
        };
        match self {
            PartitionWitness::Nc { parts, c, .. } => {
                for (i, vi) in parts.iter().enumerate() {
                    for (j, vj) in parts.iter().enumerate() {
                        if i != j && absorbs(vi.union(*c), *vj, f) {
                            return false;
                        }
                    }
                }
                true
            }
            PartitionWitness::Sc { l, c, r, .. } => {
                !absorbs(r.union(*c), *l, d * f) && !absorbs(l.union(*c), *r, d * f)
            }
        }
    }
}

impl fmt::Display for PartitionWitness {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionWitness::Nc { parts, c, f } => {
                for (k, part) in parts.iter().enumerate() {
                    write!(out, "V{k}={part} ")?;
                }
                write!(out, "C={c} F={f}")
            }
            PartitionWitness::Sc { f, l, c, r } => write!(out, "F={f} L={l} C={c} R={r}"),
        }
    }
}

impl std::str::FromStr for PartitionWitness {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut named = Vec::new();
        for tok in s.split_whitespace() {
            let (name, set) = tok
                .split_once('=')
                .ok_or_else(|| format!("expected NAME={{..}}, got `{tok}`"))?;
            named.push((name.to_string(), set.parse::<VertexSet>()?));
        }
        let find = |key: &str| {
            named
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| format!("witness lacks part `{key}`"))
        };
        if named.iter().any(|(k, _)| k == "L") {
            return Ok(PartitionWitness::Sc {
                f: find("F")?,
                l: find("L")?,
                c: find("C")?,
                r: find("R")?,
            });
        }
        let mut parts = Vec::new();
        while let Ok(part) = find(&format!("V{}", parts.len())) {
            parts.push(part);
        }
        if parts.is_empty() {
            return Err("witness has neither V0 nor L".into());
        }
        Ok(PartitionWitness::Nc {
            parts,
            c: find("C")?,
            f: find("F")?,
        })
    }
}

/// Outcome of a condition check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub condition: ConditionKind,
    pub verdict: Verdict,
    /// Present iff `verdict == Fails`.
    pub witness: Option<PartitionWitness>,
    pub partitions_checked: u64,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    pub fn to_text(&self) -> TextReport {
        let mut r = TextReport::new();
        r.set("condition", self.condition)
            .set("verdict", self.verdict)
            .set(
                "witness",
                self.witness
                    .as_ref()
                    .map_or_else(|| "none".to_string(), |w| w.to_string()),
            )
            .set("partitions_checked", self.partitions_checked);
        r
    }

    pub fn from_text(report: &TextReport) -> Result<Self> {
        let bad = |msg: String| Error::parse(0, msg);
        let condition = match report.require("condition")? {
            "NC" => ConditionKind::Nc,
            "SC" => ConditionKind::Sc,
            other => return Err(bad(format!("unknown condition `{other}`"))),
        };
        let verdict = match report.require("verdict")? {
            "holds" => Verdict::Holds,
            "fails" => Verdict::Fails,
            "not-evaluated" => Verdict::NotEvaluated,
            other => return Err(bad(format!("unknown verdict `{other}`"))),
        };
        let witness = match report.require("witness")? {
            "none" => None,
            text => Some(text.parse().map_err(bad)?),
        };
        let partitions_checked = report
            .require("partitions_checked")?
            .parse()
            .map_err(|_| bad("bad partitions_checked".into()))?;
        Ok(ConditionReport {
            condition,
            verdict,
            witness,
            partitions_checked,
        })
    }
}

/// Work limits for the exhaustive checks.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub budget: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            budget: DEFAULT_BUDGET,
        }
    }
}

/// `|N_v^- ∩ A|`.
pub fn link_count(g: &Digraph, a: VertexSet, v: ProcessId) -> Result<usize> {
    let incoming = g.in_neighbors(v)?;
    g.check_set(a)?;
    if a.contains(v) {
        return Err(Error::usage(format!("process {v} belongs to {a}")));
    }
    Ok(incoming.intersection(a).len())
}

/// `A =>^c B`.
fn absorbs(in_sets: &[VertexSet], a: VertexSet, b: VertexSet, c: usize) -> bool {
    b.iter()
        .any(|v| in_sets[v - 1].intersection(a).len() > c)
}

fn subsets_by_size(ids: VertexSet, max_size: usize) -> impl Iterator<Item = VertexSet> {
    let ids: Vec<ProcessId> = ids.iter().collect();
    (0..=max_size.min(ids.len())).flat_map(move |k| {
        ids.clone()
            .into_iter()
            .combinations(k)
            .map(VertexSet::from_ids)
    })
}

/// Partitions of `ids` into exactly `blocks` non-empty blocks, in restricted
/// growth string order.
fn block_partitions(ids: VertexSet, blocks: usize) -> impl Iterator<Item = Vec<VertexSet>> {
    let ids: Vec<ProcessId> = ids.iter().collect();
    crate::geometry::SetPartitions::new(ids.len(), blocks).map(move |labels| {
        let mut parts = vec![VertexSet::EMPTY; blocks];
        for (k, &label) in labels.iter().enumerate() {
            parts[label].insert(ids[k]);
        }
        parts
    })
}

enum Sweep {
    Violated(PartitionWitness, u64),
    Exhausted(u64),
    OverBudget(u64),
}

fn finish(condition: ConditionKind, sweep: Sweep) -> ConditionReport {
    let (verdict, witness, partitions_checked) = match sweep {
        Sweep::Violated(w, k) => (Verdict::Fails, Some(w), k),
        Sweep::Exhausted(k) => (Verdict::Holds, None, k),
        Sweep::OverBudget(k) => (Verdict::NotEvaluated, None, k),
    };
    ConditionReport {
        condition,
        verdict,
        witness,
        partitions_checked,
    }
}

pub fn check_nc(g: &Digraph, d: usize, f: usize) -> ConditionReport {
    check_nc_with(g, d, f, &CheckOptions::default())
}

/// Condition NC: for every partition `V_0..V_p, C, F` (`1 <= p <= d`, all
/// `V_k` non-empty, `|F| <= f`) there are `i != j` with `V_i ∪ C =>^f V_j`.
pub fn check_nc_with(g: &Digraph, d: usize, f: usize, opts: &CheckOptions) -> ConditionReport {
    let mut checked = 0u64;
    let stop = visit_nc_partitions(g, d, f, |parts, c, faults, violated| {
        if checked >= opts.budget {
            return ControlFlow::Break(Sweep::OverBudget(checked));
        }
        checked += 1;
        if violated {
            return ControlFlow::Break(Sweep::Violated(
                PartitionWitness::Nc {
                    parts: parts.to_vec(),
                    c,
                    f: faults,
                },
                checked,
            ));
        }
        ControlFlow::Continue(())
    });
    finish(ConditionKind::Nc, stop.unwrap_or(Sweep::Exhausted(checked)))
}

/// First NC-violating partition (canonical order) accepted by `accept`.
pub fn find_nc_violation(
    g: &Digraph,
    d: usize,
    f: usize,
    mut accept: impl FnMut(&PartitionWitness) -> bool,
) -> Option<PartitionWitness> {
    visit_nc_partitions(g, d, f, |parts, c, faults, violated| {
        if violated {
            let w = PartitionWitness::Nc {
                parts: parts.to_vec(),
                c,
                f: faults,
            };
            if accept(&w) {
                return ControlFlow::Break(w);
            }
        }
        ControlFlow::Continue(())
    })
}

/// Walks admissible NC partitions in canonical order: `p` ascending, then
/// `F` by size and lexicographically, then `C` likewise, then the blocks in
/// restricted growth order. The callback also learns whether the partition
/// violates the condition.
fn visit_nc_partitions<R>(
    g: &Digraph,
    d: usize,
    f: usize,
    mut visit: impl FnMut(&[VertexSet], VertexSet, VertexSet, bool) -> ControlFlow<R>,
) -> Option<R> {
    let in_sets = g.in_sets();
    let all = g.vertices();
    for p in 1..=d {
        if p + 1 > g.n() {
            break;
        }
        for faults in subsets_by_size(all, f.min(g.n() - (p + 1))) {
            let rest = all.difference(faults);
            for c in subsets_by_size(rest, rest.len() - (p + 1)) {
                for parts in block_partitions(rest.difference(c), p + 1) {
                    let satisfied = parts.iter().enumerate().any(|(i, vi)| {
                        let source = vi.union(c);
                        parts
                            .iter()
                            .enumerate()
                            .any(|(j, vj)| i != j && absorbs(in_sets, source, *vj, f))
                    });
                    if let ControlFlow::Break(r) = visit(&parts, c, faults, !satisfied) {
                        return Some(r);
                    }
                }
            }
        }
    }
    None
}

pub fn check_sc(g: &Digraph, d: usize, f: usize) -> ConditionReport {
    check_sc_with(g, d, f, &CheckOptions::default())
}

/// Condition SC: for every partition `F, L, C, R` (`L`, `R` non-empty,
/// `|F| <= f`), `R ∪ C =>^{df} L` or `L ∪ C =>^{df} R`.
pub fn check_sc_with(g: &Digraph, d: usize, f: usize, opts: &CheckOptions) -> ConditionReport {
    let in_sets = g.in_sets();
    let all = g.vertices();
    let budget = d * f;
    let mut checked = 0u64;
    let sweep = 'sweep: {
        for faults in subsets_by_size(all, f.min(g.n() - 2)) {
            let ids: Vec<ProcessId> = all.difference(faults).iter().collect();
            let mut labels = vec![0u8; ids.len()];
            loop {
                let mut parts = [VertexSet::EMPTY; 3];
                for (k, &label) in labels.iter().enumerate() {
                    parts[label as usize].insert(ids[k]);
                }
                let [l, c, r] = parts;
                if !l.is_empty() && !r.is_empty() && l.first() < r.first() {
                    if checked >= opts.budget {
                        break 'sweep Sweep::OverBudget(checked);
                    }
                    checked += 1;
                    if !absorbs(in_sets, r.union(c), l, budget)
                        && !absorbs(in_sets, l.union(c), r, budget)
                    {
                        break 'sweep Sweep::Violated(
                            PartitionWitness::Sc { f: faults, l, c, r },
                            checked,
                        );
                    }
                }
                if !increment_base3(&mut labels) {
                    break;
                }
            }
        }
        Sweep::Exhausted(checked)
    };
    finish(ConditionKind::Sc, sweep)
}

pub fn check_sc_via_reduced(g: &Digraph, d: usize, f: usize) -> ConditionReport {
    check_sc_via_reduced_with(g, d, f, &CheckOptions::default())
}

/// SC through its reduced-graph characterisation: holds iff every reduced
/// graph (over every `|F| <= f`) has exactly one source component.
///
/// Only the reduced graphs that delete the maximum number of links are
/// visited; deleting links cannot create a universal root, so they decide the
/// rest. On failure, two source components `S1`, `S2` of the offending reduced
/// graph yield the SC witness `F, L = S1, C = rest, R = S2`. The report's
/// `partitions_checked` counts reduced graphs examined.
pub fn check_sc_via_reduced_with(
    g: &Digraph,
    d: usize,
    f: usize,
    opts: &CheckOptions,
) -> ConditionReport {
    let all = g.vertices();
    let budget = d * f;
    let fault_sets: Vec<VertexSet> = subsets_by_size(all, f.min(g.n() - 1)).collect();

    let total: BigUint = fault_sets
        .iter()
        .map(|&faults| maximal_count(g, faults, budget))
        .sum();
    if total > BigUint::from(opts.budget) {
        return finish(ConditionKind::Sc, Sweep::OverBudget(0));
    }

    let mut checked = 0u64;
    for faults in fault_sets {
        let survivors = all.difference(faults);
        for in_sets in maximal_reduced_in_sets(g, faults, budget) {
            checked += 1;
            if !reaches_all(survivors, &in_sets) {
                let sources = source_components(survivors, &in_sets);
                debug_assert!(sources.len() >= 2);
                let (l, r) = (sources[0], sources[1]);
                let c = survivors.difference(l).difference(r);
                return finish(
                    ConditionKind::Sc,
                    Sweep::Violated(PartitionWitness::Sc { f: faults, l, c, r }, checked),
                );
            }
        }
    }
    finish(ConditionKind::Sc, Sweep::Exhausted(checked))
}

/// Odometer step over `{0,1,2}^k`, last digit fastest. False on wrap-around.
fn increment_base3(labels: &mut [u8]) -> bool {
    for k in (0..labels.len()).rev() {
        labels[k] += 1;
        if labels[k] < 3 {
            return true;
        }
        labels[k] = 0;
    }
    false
}

fn maximal_count(g: &Digraph, faults: VertexSet, budget: usize) -> BigUint {
    g.vertices()
        .difference(faults)
        .iter()
        .map(|v| {
            let a = g.in_sets()[v - 1].difference(faults).len();
            binomial(a, budget.min(a))
        })
        .product()
}

/// Reference implementation of the reduced-graph route that visits every
/// reduced graph, not just the maximal ones. Exponentially slower; for
/// cross-checks on tiny graphs.
pub fn check_sc_via_all_reduced(g: &Digraph, d: usize, f: usize) -> Result<bool> {
    for faults in subsets_by_size(g.vertices(), f.min(g.n() - 1)) {
        for h in crate::graph::enumerate_reduced_graphs(g, faults, d, f)? {
            if h.decompose().source_count() != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// In-degree bound: every process has at least `(d+1)f + 1` in-neighbours.
/// Vacuously true for `f = 0`.
pub fn check_degree_bound(g: &Digraph, d: usize, f: usize) -> bool {
    f == 0 || g.min_in_degree() > (d + 1) * f
}

/// Population bound `n >= (d+2)f + 1`.
pub fn check_population_bound(n: usize, d: usize, f: usize) -> bool {
    n > (d + 2) * f
}

/// Combined reading of an NC and an SC verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solvability {
    /// SC holds: `Byz-Iter` achieves consensus.
    Solvable,
    /// NC fails: no iterative algorithm can.
    Unsolvable,
    /// NC holds but SC fails; neither condition settles the question.
    Undetermined,
    Unknown,
}

impl Solvability {
    pub fn classify(nc: Verdict, sc: Verdict) -> Self {
        match (nc, sc) {
            (_, Verdict::Holds) => Solvability::Solvable,
            (Verdict::Fails, _) => Solvability::Unsolvable,
            (Verdict::Holds, Verdict::Fails) => Solvability::Undetermined,
            _ => Solvability::Unknown,
        }
    }
}

impl fmt::Display for Solvability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solvability::Solvable => "solvable (SC holds)",
            Solvability::Unsolvable => "unsolvable by iterative algorithms (NC fails)",
            Solvability::Undetermined => {
                "undetermined: NC holds but SC fails, neither condition decides this graph"
            }
            Solvability::Unknown => "unknown (a check was not evaluated)",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(ids: &[usize]) -> VertexSet {
        VertexSet::from_ids(ids.iter().copied())
    }

    fn k(n: usize) -> Digraph {
        Digraph::complete(n).unwrap()
    }

    #[test]
    fn link_counts() {
        assert_eq!(link_count(&k(4), set(&[2, 3]), 1).unwrap(), 2);
        assert_eq!(link_count(&k(4), VertexSet::EMPTY, 1).unwrap(), 0);
        let g = Digraph::from_edges(3, [(1, 3), (2, 3)]).unwrap();
        assert_eq!(link_count(&g, set(&[1]), 3).unwrap(), 1);
        assert!(matches!(link_count(&g, set(&[1, 3]), 3), Err(Error::Usage(_))));
    }

    #[test]
    fn nc_examples() {
        let r = check_nc(&k(3), 1, 1);
        assert!(r.fails());
        let w = r.witness.unwrap();
        assert!(w.violates(&k(3), 1, 1));
        assert_eq!(
            w,
            PartitionWitness::Nc {
                parts: vec![set(&[2]), set(&[3])],
                c: VertexSet::EMPTY,
                f: set(&[1]),
            }
        );
        assert!(check_nc(&k(4), 1, 1).holds());
        let two = Digraph::from_edges(2, [(1, 2), (2, 1)]).unwrap();
        let r = check_nc(&two, 1, 0);
        assert!(r.holds());
        // only V0={1},V1={2}
        assert_eq!(r.partitions_checked, 1);
    }

    #[test]
    fn sc_examples() {
        assert!(check_sc(&k(4), 1, 1).holds());
        let r = check_sc(&k(5), 2, 1);
        assert!(r.fails());
        let w = r.witness.unwrap();
        assert!(w.violates(&k(5), 2, 1));
        if let PartitionWitness::Sc { l, c, r, .. } = w {
            assert!(l.union(c).len() <= 2 && r.union(c).len() <= 2);
        }
        assert!(check_sc(&k(6), 2, 1).holds());
    }

    #[test]
    fn k5_with_two_dimensions_is_in_the_gap() {
        assert!(check_nc(&k(5), 2, 1).holds());
        assert!(check_sc(&k(5), 2, 1).fails());
        assert_eq!(
            Solvability::classify(Verdict::Holds, Verdict::Fails),
            Solvability::Undetermined
        );
    }

    #[test]
    fn reduced_route_examples() {
        assert!(check_sc_via_reduced(&k(4), 1, 1).holds());
        let r = check_sc_via_reduced(&k(5), 2, 1);
        assert!(r.fails());
        assert!(r.witness.unwrap().violates(&k(5), 2, 1));
        // f = 0: a single reduced graph, the graph itself
        let g = Digraph::from_edges(3, [(1, 2), (3, 2)]).unwrap();
        assert!(check_sc_via_reduced(&g, 1, 0).fails());
        assert!(check_sc_via_reduced(&Digraph::cycle(3).unwrap(), 1, 0).holds());
    }

    #[test]
    fn budget_exhaustion_is_reported_not_guessed() {
        let opts = CheckOptions { budget: 3 };
        let r = check_sc_with(&k(6), 2, 1, &opts);
        assert_eq!(r.verdict, Verdict::NotEvaluated);
        assert!(r.witness.is_none());
        assert_eq!(check_nc_with(&k(6), 2, 1, &opts).verdict, Verdict::NotEvaluated);
        assert_eq!(
            check_sc_via_reduced_with(&k(6), 2, 1, &opts).verdict,
            Verdict::NotEvaluated
        );
    }

    #[test]
    fn bounds() {
        assert!(check_degree_bound(&k(4), 1, 1));
        assert!(!check_degree_bound(&k(3), 1, 1));
        assert!(check_degree_bound(&Digraph::new(3).unwrap(), 3, 0));
        assert!(check_population_bound(4, 1, 1));
        assert!(!check_population_bound(3, 1, 1));
        assert!(check_population_bound(7, 2, 1));
    }

    #[test]
    fn report_text_round_trip() {
        for r in [check_nc(&k(3), 1, 1), check_sc(&k(5), 2, 1), check_sc(&k(4), 1, 1)] {
            let text = r.to_text().to_string();
            let back = ConditionReport::from_text(&TextReport::parse(&text).unwrap()).unwrap();
            assert_eq!(back, r);
        }
    }

    fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
        (2..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(proptest::bool::weighted(0.7), n * n).prop_map(move |bits| {
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
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn condition_implications(g in arb_digraph(6), (d, f) in prop_oneof![Just((1, 0)), Just((1, 1)), Just((2, 1)), Just((2, 0))]) {
            let nc = check_nc(&g, d, f);
            let sc = check_sc(&g, d, f);
            let via = check_sc_via_reduced(&g, d, f);
            prop_assert_eq!(sc.verdict, via.verdict);
            if sc.holds() {
                prop_assert!(nc.holds());
                if f > 0 { prop_assert!(check_degree_bound(&g, d, f)); }
            }
            if nc.holds() {
                prop_assert!(check_population_bound(g.n(), d, f));
            }
            for r in [&nc, &sc, &via] {
                if let Some(w) = &r.witness {
                    prop_assert!(w.violates(&g, d, f), "{}", w);
                }
            }
        }

        #[test]
        fn maximal_shortcut_matches_full_reduced_enumeration(g in arb_digraph(4), (d, f) in prop_oneof![Just((1, 1)), Just((2, 1)), Just((1, 0))]) {
            prop_assert_eq!(check_sc_via_all_reduced(&g, d, f).unwrap(), check_sc_via_reduced(&g, d, f).holds());
        }
    }
}
