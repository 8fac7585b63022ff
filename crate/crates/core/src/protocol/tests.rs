use std::collections::BTreeMap;


use super::*;
use crate::conditions::{check_nc, find_nc_violation};
use crate::graph::Digraph;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn p1(x: i64) -> Point {
    Point::from_integers(&[x])
}

fn k4_silent(termination: Termination) -> Scenario {
    Scenario {
        graph: GraphFile::numeric(Digraph::complete(4).unwrap()),
        d: 1,
        f: 1,
        epsilon: q(1, 100),
        mu: q(0, 1),
        upper: q(2, 1),
        inputs: BTreeMap::from([(1, p1(0)), (2, p1(1)), (3, p1(2))]),
        faults: BTreeMap::from([(4, AdversaryStrategy::Silent)]),
        termination,
        seed: 1,
    }
}

#[test]
fn update_without_faults_is_the_average() {
    let v = update_step(&p1(2), &[p1(0), p1(4)], 1, 0).unwrap();
    assert_eq!(v, p1(2));
}

#[test]
fn update_with_medians() {
    // subsets {0,1,2},{0,1,10},{0,2,10},{1,2,10} have medians 1,1,2,2
    let v = update_step(&p1(0), &[p1(0), p1(1), p1(2), p1(10)], 1, 1).unwrap();
    assert_eq!(v, Point::new(vec![q(6, 5)]).unwrap());
}

#[test]
fn update_with_too_few_values_keeps_state() {
    let v = update_step(&p1(7), &[p1(0), p1(1)], 1, 1).unwrap();
    assert_eq!(v, p1(7));
    assert!(update_step(&p1(7), &[Point::from_integers(&[0, 1])], 1, 0).is_err());
}

#[test]
fn silent_sender_delivers_origin() {
    let s = k4_silent(Termination::FixedRounds(1));
    let mut adv = scenario_adversaries(&s);
    let msgs = build_round_messages(&s.inputs, &s, &mut adv, 1).unwrap();
    assert_eq!(msgs.len(), 9);
    for m in &msgs {
        if m.from == 4 {
            assert!(m.omitted);
            assert_eq!(m.point, p1(0));
        } else {
            assert_eq!(m.point, s.inputs[&m.from]);
        }
    }
}

#[test]
fn fixed_partition_sends_axis_points() {
    let mut s = k4_silent(Termination::FixedRounds(1));
    s.d = 2;
    s.inputs = s
        .inputs
        .iter()
        .map(|(&v, p)| (v, Point::new(vec![p.coord(0).clone(), q(0, 1)]).unwrap()))
        .collect();
    s.faults.insert(
        4,
        AdversaryStrategy::FixedPartition(BTreeMap::from([(1, 1), (2, 2), (3, 0)])),
    );
    let mut adv = scenario_adversaries(&s);
    let msgs = build_round_messages(&s.inputs, &s, &mut adv, 1).unwrap();
    let from4: Vec<_> = msgs.iter().filter(|m| m.from == 4).collect();
    assert_eq!(from4[0].point, Point::new(vec![q(1, 50), q(0, 1)]).unwrap());
    assert_eq!(from4[1].point, Point::new(vec![q(0, 1), q(1, 50)]).unwrap());
    assert_eq!(from4[2].point, Point::origin(2));
}

#[test]
fn k4_silent_run_converges_in_range() {
    let s = k4_silent(Termination::EmpiricalSpread { max_rounds: 1000 });
    let trace = run_execution(&s).unwrap();
    assert_eq!(trace.outcome, Outcome::Converged);
    assert!(trace.final_spread()[0] < q(1, 100));
    for state in trace.final_states().values() {
        assert!(*state.coord(0) >= q(0, 1) && *state.coord(0) <= q(2, 1));
    }
    // every fault-free receiver hears from all 3 in-neighbours every round
    for round in &trace.rounds[1..] {
        for &i in &trace.fault_free {
            assert_eq!(round.messages.iter().filter(|m| m.to == i).count(), 3);
        }
    }
}

#[test]
fn equal_inputs_are_a_fixed_point() {
    let g = Digraph::cycle(4).unwrap();
    let s = Scenario {
        graph: GraphFile::numeric(g),
        d: 2,
        f: 0,
        epsilon: q(1, 10),
        mu: q(0, 1),
        upper: q(5, 1),
        inputs: (1..=4).map(|v| (v, Point::from_integers(&[3, 4]))).collect(),
        faults: BTreeMap::new(),
        termination: Termination::FixedRounds(6),
        seed: 0,
    };
    let trace = run_execution(&s).unwrap();
    assert_eq!(trace.rounds_executed(), 6);
    for r in &trace.rounds {
        assert!(r.states.values().all(|p| *p == Point::from_integers(&[3, 4])));
    }
}

#[test]
fn empirical_stops_at_round_zero_when_inputs_agree() {
    let mut s = k4_silent(Termination::EmpiricalSpread { max_rounds: 5 });
    s.inputs = (1..=3).map(|v| (v, p1(1))).collect();
    let trace = run_execution(&s).unwrap();
    assert_eq!(trace.rounds_executed(), 0);
    assert_eq!(trace.outcome, Outcome::Converged);
}

#[test]
fn cap_reached_is_reported() {
    let s = k4_silent(Termination::EmpiricalSpread { max_rounds: 1 });
    let trace = run_execution(&s).unwrap();
    assert_eq!(trace.outcome, Outcome::CapReached);
    assert_eq!(trace.rounds_executed(), 1);
}

#[test]
fn paper_bound_beyond_limit_is_refused() {
    let s = k4_silent(Termination::PaperBound);
    assert!(matches!(run_execution(&s), Err(Error::Budget(_))));
}

#[test]
fn necessity_run_is_constant() {
    let g = Digraph::complete(3).unwrap();
    let report = check_nc(&g, 1, 1);
    let witness = report.witness.unwrap();
    let s = necessity_scenario(
        GraphFile::numeric(g),
        1,
        1,
        &witness,
        q(1, 10),
        Termination::FixedRounds(20),
    )
    .unwrap();
    let trace = run_execution(&s).unwrap();
    for r in &trace.rounds {
        assert_eq!(r.states, *trace.inputs());
    }
    assert_eq!(trace.final_spread(), vec![q(1, 5)]);
}

#[test]
fn necessity_run_on_two_cliques() {
    // two disjoint K4s fail NC for d = 1, f = 1
    let mut g = Digraph::new(8).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            if a != b {
                g.add_edge(a + 1, b + 1).unwrap();
                g.add_edge(a + 5, b + 5).unwrap();
            }
        }
    }
    let witness = find_nc_violation(&g, 1, 1, |w| match w {
        crate::conditions::PartitionWitness::Nc { c, .. } => c.is_empty(),
        _ => false,
    })
    .unwrap();
    let s = necessity_scenario(GraphFile::numeric(g), 1, 1, &witness, q(1, 2), Termination::FixedRounds(5))
        .unwrap();
    let trace = run_execution(&s).unwrap();
    assert!(trace.rounds.iter().all(|r| r.states == *trace.inputs()));
    assert_eq!(trace.final_spread(), vec![q(1, 1)]);
}

#[test]
fn runs_are_deterministic() {
    let mut s = k4_silent(Termination::FixedRounds(4));
    s.faults.insert(4, AdversaryStrategy::RandomInRange);
    let a = run_execution(&s).unwrap();
    let b = run_execution(&s).unwrap();
    assert_eq!(a, b);
    let mut bytes_a = Vec::new();
    let mut bytes_b = Vec::new();
    write_trace(&mut bytes_a, &a, None).unwrap();
    write_trace(&mut bytes_b, &b, None).unwrap();
    assert_eq!(bytes_a, bytes_b);
    s.seed += 1;
    let c = run_execution(&s).unwrap();
    assert_ne!(a.rounds[1].messages, c.rounds[1].messages);
}

#[test]
fn random_values_stay_on_the_grid() {
    let mut s = k4_silent(Termination::FixedRounds(3));
    s.faults.insert(4, AdversaryStrategy::RandomInRange);
    let trace = run_execution(&s).unwrap();
    for r in &trace.rounds[1..] {
        for m in r.messages.iter().filter(|m| m.from == 4) {
            let x = m.point.coord(0);
            assert!(!m.omitted && *x >= s.mu && *x <= s.upper);
            let steps = x * Rational::from_integer(500.into());
            assert!(steps.is_integer());
        }
    }
}

#[test]
fn trace_round_trips_through_jsonl() {
    let mut s = k4_silent(Termination::FixedRounds(3));
    s.faults.insert(
        4,
        AdversaryStrategy::Custom(BTreeMap::from([((2, 1), p1(2))])),
    );
    let trace = run_execution(&s).unwrap();
    let summary = TraceSummary {
        rounds: 3,
        outcome: trace.outcome,
        termination: trace.termination,
        spread: trace.final_spread(),
        validity: Some(true),
        agreement: None,
        t_end: "12345".into(),
        t_end_executed: false,
    };
    let mut bytes = Vec::new();
    write_trace(&mut bytes, &trace, Some(&summary)).unwrap();
    let (back, back_summary) = read_trace(bytes.as_slice()).unwrap();
    assert_eq!(back, trace);
    assert_eq!(back_summary, Some(summary));
    let truncated = &bytes[..bytes.len() / 2];
    let cut = truncated.iter().rposition(|&b| b == b'\n').unwrap() + 1;
    assert!(read_trace(&truncated[..cut]).is_err());
}

#[test]
fn spread_table_rows() {
    let s = k4_silent(Termination::FixedRounds(2));
    let trace = run_execution(&s).unwrap();
    let table = trace.spread_table();
    assert_eq!(table.len(), 3);
    assert_eq!(table[0], (0, 1, q(2, 1)));
}
