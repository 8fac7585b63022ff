//! Cross-module properties of executions.

mod common;

use std::collections::BTreeMap;

use byzvec::analysis::{verify_epsilon_agreement, verify_validity};
use byzvec::conditions::{check_nc, find_nc_violation, PartitionWitness};
use byzvec::geometry::Point;
use byzvec::graph::{has_universal_root, Digraph, GraphFile};
use byzvec::protocol::{
    necessity_scenario, run_execution, write_trace, AdversaryStrategy, Scenario, Termination,
};
use byzvec::Rational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn strategy() -> impl Strategy<Value = AdversaryStrategy> {
    let point = (0i64..=8).prop_map(|k| Point::new(vec![q(k, 4)]).unwrap());
    prop_oneof![
        Just(AdversaryStrategy::Silent),
        Just(AdversaryStrategy::RandomInRange),
        prop::collection::btree_map(1usize..=4, point.clone(), 0..4).prop_map(AdversaryStrategy::Equivocate),
        prop::collection::btree_map(1usize..=4, 0usize..=1, 0..4).prop_map(AdversaryStrategy::FixedPartition),
        prop::collection::btree_map((1u64..=4, 1usize..=4), point, 0..6).prop_map(AdversaryStrategy::Custom),
    ]
}

fn k5_scenario(inputs: Vec<i64>, faulty: usize, adversary: AdversaryStrategy, seed: u64) -> Scenario {
    let inputs: BTreeMap<usize, Point> = (1..=5)
        .filter(|&v| v != faulty)
        .zip(inputs)
        .map(|(v, x)| (v, Point::new(vec![q(x, 4)]).unwrap()))
        .collect();
    Scenario {
        graph: GraphFile::numeric(Digraph::complete(5).unwrap()),
        d: 1,
        f: 1,
        epsilon: q(1, 50),
        mu: q(0, 1),
        upper: q(2, 1),
        inputs,
        faults: BTreeMap::from([(faulty, adversary)]),
        termination: Termination::FixedRounds(4),
        seed,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_state_stays_in_the_input_hull(
        inputs in prop::collection::vec(0i64..=8, 4),
        faulty in 1usize..=5,
        adversary in strategy(),
        seed in any::<u64>(),
    ) {
        let s = k5_scenario(inputs, faulty, adversary, seed);
        let trace = run_execution(&s).unwrap();
        prop_assert!(verify_validity(&trace, &s).unwrap().passed());
        // identical scenarios give identical traces, byte for byte
        let again = run_execution(&s).unwrap();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        write_trace(&mut a, &trace, None).unwrap();
        write_trace(&mut b, &again, None).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn fault_free_averaging_never_widens(
        n in 2usize..=5,
        extra in prop::collection::vec((1usize..=5, 1usize..=5), 0..6),
        coords in prop::collection::vec((0i64..=6, 0i64..=6), 5),
    ) {
        let mut g = Digraph::cycle(n).unwrap();
        for (a, b) in extra {
            if a <= n && b <= n && a != b {
                g.add_edge(a, b).unwrap();
            }
        }
        let s = Scenario {
            graph: GraphFile::numeric(g),
            d: 2,
            f: 0,
            epsilon: q(1, 100),
            mu: q(0, 1),
            upper: q(6, 1),
            inputs: (1..=n).map(|v| (v, Point::from_integers(&[coords[v - 1].0, coords[v - 1].1]))).collect(),
            faults: BTreeMap::new(),
            termination: Termination::FixedRounds(6),
            seed: 0,
        };
        let trace = run_execution(&s).unwrap();
        for t in 1..=6 {
            let before = trace.spread_at(t - 1).unwrap();
            let after = trace.spread_at(t).unwrap();
            prop_assert!(after.iter().zip(&before).all(|(a, b)| a <= b));
        }
        prop_assert!(verify_validity(&trace, &s).unwrap().passed());
    }
}

#[test]
fn necessity_traces_are_constant_on_small_graphs() {
    let eps = q(1, 8);
    let mut reproduced = 0;
    for n in 3..=4 {
        for g in common::nonisomorphic_digraphs(n) {
            for (d, f) in [(1, 1), (2, 1)] {
                if check_nc(&g, d, f).holds() {
                    continue;
                }
                let Some(w) = find_nc_violation(&g, d, f, |w| {
                    matches!(w, PartitionWitness::Nc { c, .. } if c.is_empty())
                }) else {
                    continue;
                };
                let s = necessity_scenario(GraphFile::numeric(g.clone()), d, f, &w, eps.clone(), Termination::FixedRounds(3))
                    .unwrap();
                let trace = run_execution(&s).unwrap();
                assert!(
                    trace.rounds.iter().all(|r| r.states == *trace.inputs()),
                    "states moved for {:?} with {w}",
                    g.edges()
                );
                assert!(trace.final_spread().contains(&(&eps * q(2, 1))));
                assert!(!verify_epsilon_agreement(&trace, &eps).passed());
                reproduced += 1;
            }
        }
    }
    assert!(reproduced > 100, "only {reproduced} instances");
}

#[test]
fn small_class_counts() {
    assert_eq!(common::nonisomorphic_digraphs(2).len(), 3);
    assert_eq!(common::nonisomorphic_digraphs(3).len(), 16);
    assert_eq!(common::nonisomorphic_digraphs(4).len(), 218);
    let rooted = common::nonisomorphic_digraphs(3)
        .iter()
        .filter(|g| has_universal_root(g))
        .count();
    assert!(rooted > 0 && rooted < 16);
}
