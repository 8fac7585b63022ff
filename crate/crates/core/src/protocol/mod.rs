//! The Byz-Iter state machine: transmit, receive, update.

mod adversary;
mod bounds;
mod scenario;
mod trace;

use std::collections::BTreeMap;

use itertools::Itertools;
use num::{BigInt, ToPrimitive};
use rayon::prelude::*;

pub use adversary::{partition_point, Adversary, AdversaryStrategy, AdversaryView, RANDOM_GRID};
pub use bounds::{block_bound_search, compute_beta, compute_t_end, paper_bounds, PaperBounds};
pub use scenario::{Scenario, Termination, DEFAULT_MAX_ROUNDS};
pub use trace::{read_trace, write_trace, ExecutionTrace, Outcome, RoundRecord, TraceSummary};

use crate::conditions::PartitionWitness;
use crate::geometry::{check_dims, tverberg_point_fast, Point};
use crate::graph::{GraphFile, ProcessId};
use crate::{Error, Rational, Result};

/// A value as received on edge `(from, to)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delivery {
    pub from: ProcessId,
    pub to: ProcessId,
    pub point: Point,
    /// The sender sent nothing and `point` is the default `e_0`.
    pub omitted: bool,
}

/// Faulty processes' callbacks, keyed by id.
pub type Adversaries = BTreeMap<ProcessId, Box<dyn Adversary>>;

/// The adversaries described by the scenario itself.
pub fn scenario_adversaries(scenario: &Scenario) -> Adversaries {
    scenario
        .faults
        .iter()
        .map(|(&v, s)| (v, s.build(scenario.seed, v)))
        .collect()
}

/// Messages of round `t` on every edge into a fault-free process, ordered by
/// receiver and then sender.
pub fn build_round_messages(
    states: &BTreeMap<ProcessId, Point>,
    scenario: &Scenario,
    adversaries: &mut Adversaries,
    t: u64,
) -> Result<Vec<Delivery>> {
    let g = scenario.digraph();
    let view = AdversaryView {
        scenario,
        round: t,
        states,
    };
    let mut out = Vec::new();
    for to in scenario.fault_free() {
        for from in g.in_neighbors(to)?.iter() {
            let sent = match adversaries.get_mut(&from) {
                Some(adversary) => adversary.message(&view, from, to),
                None => Some(
                    states
                        .get(&from)
                        .cloned()
                        .ok_or_else(|| Error::usage(format!("no state for process {from}")))?,
                ),
            };
            let delivery = match sent {
                Some(point) => {
                    check_dims(std::slice::from_ref(&point), scenario.d)?;
                    Delivery {
                        from,
                        to,
                        point,
                        omitted: false,
                    }
                }
                None => Delivery {
                    from,
                    to,
                    point: Point::origin(scenario.d),
                    omitted: true,
                },
            };
            out.push(delivery);
        }
    }
    Ok(out)
}

/// One update: the average of `v_prev` and a Tverberg point of every
/// `(d+1)f+1`-subset of the received slots (lexicographic slot order).
pub fn update_step(v_prev: &Point, received: &[Point], d: usize, f: usize) -> Result<Point> {
    check_dims(std::slice::from_ref(v_prev), d)?;
    check_dims(received, d)?;
    let subset = (d + 1) * f + 1;
    if received.len() < subset {
        return Ok(v_prev.clone());
    }
    let subsets: Vec<Vec<usize>> = (0..received.len()).combinations(subset).collect();
    let points = subsets
        .par_iter()
        .map(|slots| {
            let chosen: Vec<Point> = slots.iter().map(|&i| received[i].clone()).collect();
            tverberg_point_fast(&chosen, f)
        })
        .collect::<Result<Vec<Point>>>()?;
    let mut sum: Vec<Rational> = v_prev.coords().to_vec();
    for z in &points {
        for (acc, c) in sum.iter_mut().zip(z.coords()) {
            *acc += c;
        }
    }
    let count = Rational::from_integer(BigInt::from(points.len() + 1));
    Point::new(sum.into_iter().map(|c| c / &count).collect())
}

/// Limits for [`run_execution_with`].
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// `PaperBound` executions refuse to run more rounds than this.
    pub max_paper_rounds: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_paper_rounds: DEFAULT_MAX_ROUNDS,
        }
    }
}

pub fn run_execution(scenario: &Scenario) -> Result<ExecutionTrace> {
    run_execution_with(scenario, scenario_adversaries(scenario), RunOptions::default())
}

/// Runs with caller-supplied adversaries (any faulty process without one
/// is silent).
pub fn run_execution_with(
    scenario: &Scenario,
    mut adversaries: Adversaries,
    opts: RunOptions,
) -> Result<ExecutionTrace> {
    scenario.validate()?;
    let fault_set = scenario.fault_set();
    adversaries.retain(|v, _| fault_set.contains(*v));
    for v in fault_set.iter() {
        adversaries
            .entry(v)
            .or_insert_with(|| AdversaryStrategy::Silent.build(scenario.seed, v));
    }

    let (limit, empirical) = match scenario.termination {
        Termination::FixedRounds(k) => (k, false),
        Termination::EmpiricalSpread { max_rounds } => (max_rounds, true),
        Termination::PaperBound => {
            let t_end = compute_t_end(
                scenario.digraph(),
                scenario.d,
                scenario.f,
                &scenario.mu,
                &scenario.upper,
                &scenario.epsilon,
            )?;
            let rounds = t_end
                .to_u64()
                .filter(|&t| t <= opts.max_paper_rounds)
                .ok_or_else(|| {
                    Error::Budget(format!(
                        "t_end = {t_end} exceeds the {} round limit",
                        opts.max_paper_rounds
                    ))
                })?;
            (rounds, false)
        }
    };

    let fault_free = scenario.fault_free();
    let mut trace = ExecutionTrace {
        scenario_hash: scenario.hash(),
        n: scenario.n(),
        d: scenario.d,
        fault_free: fault_free.clone(),
        termination: scenario.termination,
        rounds: vec![RoundRecord {
            t: 0,
            messages: Vec::new(),
            states: scenario.inputs.clone(),
        }],
        outcome: Outcome::Completed,
    };
    let converged = |states: &BTreeMap<ProcessId, Point>| {
        trace::spread(states, scenario.d)
            .iter()
            .all(|s| *s < scenario.epsilon)
    };
    if empirical && converged(&scenario.inputs) {
        trace.outcome = Outcome::Converged;
        return Ok(trace);
    }
    for t in 1..=limit {
        let prev = &trace.rounds.last().expect("round 0").states;
        let messages = build_round_messages(prev, scenario, &mut adversaries, t)?;
        let updated = fault_free
            .par_iter()
            .map(|&i| {
                let received: Vec<Point> = messages
                    .iter()
                    .filter(|m| m.to == i)
                    .map(|m| m.point.clone())
                    .collect();
                update_step(&prev[&i], &received, scenario.d, scenario.f).map(|p| (i, p))
            })
            .collect::<Result<BTreeMap<ProcessId, Point>>>()?;
        let done = empirical && converged(&updated);
        trace.rounds.push(RoundRecord {
            t,
            messages,
            states: updated,
        });
        if done {
            trace.outcome = Outcome::Converged;
            return Ok(trace);
        }
    }
    if empirical {
        trace.outcome = Outcome::CapReached;
    }
    Ok(trace)
}

/// The adversary setup from the necessity argument, built from an NC
/// violation `V_0..V_p, C, F`: fault-free processes of `V_i` start at `e_i`,
/// those of `C` at `e_0`, and every faulty process sends `e_i` into `V_i` and
/// `e_0` into `C`. Elements range over `[0, 2 epsilon]`.
pub fn necessity_scenario(
    graph: GraphFile,
    d: usize,
    f: usize,
    witness: &PartitionWitness,
    epsilon: Rational,
    termination: Termination,
) -> Result<Scenario> {
    let PartitionWitness::Nc { parts, c, f: faults } = witness else {
        return Err(Error::usage("necessity scenarios need an NC partition"));
    };
    if parts.len() > d + 1 {
        return Err(Error::usage("NC partition has more than d+1 blocks"));
    }
    let mut block_of = BTreeMap::new();
    for (i, part) in parts.iter().enumerate() {
        for v in part.iter() {
            block_of.insert(v, i);
        }
    }
    for v in c.iter() {
        block_of.insert(v, 0);
    }
    let inputs = block_of
        .iter()
        .map(|(&v, &i)| (v, partition_point(d, i, &epsilon)))
        .collect();
    let strategy = AdversaryStrategy::FixedPartition(block_of);
    let faults = faults.iter().map(|v| (v, strategy.clone())).collect();
    let upper = &epsilon * Rational::from_integer(BigInt::from(2));
    let scenario = Scenario {
        graph,
        d,
        f,
        epsilon,
        mu: Rational::from_integer(BigInt::from(0)),
        upper,
        inputs,
        faults,
        termination,
        seed: 0,
    };
    scenario.validate()?;
    Ok(scenario)
}

#[cfg(test)]
mod tests;
