//! Execution traces and their line-delimited JSON form.
//!
//! One record per line: a `header`, then for every round `t` its `message`
//! records and one `state` record per fault-free process, and optionally a
//! final `summary`. Rationals are strings (`"p"` or `"p/q"`).

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Delivery, Termination};
use crate::geometry::Point;
use crate::graph::ProcessId;
use crate::rational::{format_rational, parse_rational};
use crate::{Error, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Ran the requested number of rounds.
    Completed,
    /// Spread dropped below epsilon.
    Converged,
    /// Hit the round cap without converging.
    CapReached,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Completed => "completed",
            Outcome::Converged => "converged",
            Outcome::CapReached => "cap-reached",
        })
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "completed" => Ok(Outcome::Completed),
            "converged" => Ok(Outcome::Converged),
            "cap-reached" => Ok(Outcome::CapReached),
            other => Err(Error::usage(format!("unknown outcome `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub t: u64,
    /// Deliveries to fault-free processes (empty for `t = 0`).
    pub messages: Vec<Delivery>,
    /// Fault-free states after the update of round `t` (inputs for `t = 0`).
    pub states: BTreeMap<ProcessId, Point>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub scenario_hash: String,
    pub n: usize,
    pub d: usize,
    pub fault_free: Vec<ProcessId>,
    pub termination: Termination,
    /// `rounds[t]` is round `t`; `rounds[0]` holds the inputs.
    pub rounds: Vec<RoundRecord>,
    pub outcome: Outcome,
}

impl ExecutionTrace {
    pub fn rounds_executed(&self) -> u64 {
        self.rounds.len() as u64 - 1
    }

    pub fn inputs(&self) -> &BTreeMap<ProcessId, Point> {
        &self.rounds[0].states
    }

    pub fn final_states(&self) -> &BTreeMap<ProcessId, Point> {
        &self.rounds.last().expect("round 0 always present").states
    }

    /// Per-coordinate `max - min` over fault-free states of round `t`.
    pub fn spread_at(&self, t: u64) -> Option<Vec<Rational>> {
        self.rounds
            .get(t as usize)
            .map(|r| spread(&r.states, self.d))
    }

    pub fn final_spread(&self) -> Vec<Rational> {
        spread(self.final_states(), self.d)
    }

    /// `(t, coordinate, spread)` rows with 1-based coordinates.
    pub fn spread_table(&self) -> Vec<(u64, usize, Rational)> {
        self.rounds
            .iter()
            .flat_map(|r| {
                spread(&r.states, self.d)
                    .into_iter()
                    .enumerate()
                    .map(move |(k, s)| (r.t, k + 1, s))
            })
            .collect()
    }
}

pub(crate) fn spread(states: &BTreeMap<ProcessId, Point>, d: usize) -> Vec<Rational> {
    (0..d)
        .map(|k| {
            let column = states.values().map(|p| p.coord(k));
            match (column.clone().min(), column.max()) {
                (Some(lo), Some(hi)) => hi - lo,
                _ => Rational::from_integer(0.into()),
            }
        })
        .collect()
}

/// End-of-run summary appended to a trace file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSummary {
    pub rounds: u64,
    pub outcome: Outcome,
    pub termination: Termination,
    pub spread: Vec<Rational>,
    pub validity: Option<bool>,
    pub agreement: Option<bool>,
    /// `t_end` as text (a number, or why it was not computed).
    pub t_end: String,
    /// Whether the run actually executed `t_end` rounds.
    pub t_end_executed: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum Record {
    Header {
        scenario_hash: String,
        n: usize,
        d: usize,
        fault_free: Vec<ProcessId>,
        termination: String,
        outcome: String,
        rounds: u64,
    },
    Message {
        t: u64,
        from: ProcessId,
        to: ProcessId,
        point: Vec<String>,
        omitted: bool,
    },
    State {
        t: u64,
        process: ProcessId,
        point: Vec<String>,
    },
    Summary {
        rounds: u64,
        outcome: String,
        termination: String,
        spread: Vec<String>,
        validity: Option<bool>,
        agreement: Option<bool>,
        t_end: String,
        t_end_executed: bool,
    },
}

fn encode(p: &Point) -> Vec<String> {
    p.coords().iter().map(format_rational).collect()
}

fn decode(line: usize, coords: &[String]) -> Result<Point> {
    let values = coords
        .iter()
        .map(|c| parse_rational(c).ok_or_else(|| Error::parse(line, format!("bad rational `{c}`"))))
        .collect::<Result<Vec<_>>>()?;
    Point::new(values).map_err(|e| Error::parse(line, e.to_string()))
}

fn emit(out: &mut impl Write, record: &Record) -> Result<()> {
    let line = serde_json::to_string(record).expect("records serialise");
    writeln!(out, "{line}")?;
    Ok(())
}

pub fn write_trace(out: &mut impl Write, trace: &ExecutionTrace, summary: Option<&TraceSummary>) -> Result<()> {
    emit(
        out,
        &Record::Header {
            scenario_hash: trace.scenario_hash.clone(),
            n: trace.n,
            d: trace.d,
            fault_free: trace.fault_free.clone(),
            termination: trace.termination.to_string(),
            outcome: trace.outcome.to_string(),
            rounds: trace.rounds_executed(),
        },
    )?;
    for round in &trace.rounds {
        for m in &round.messages {
            emit(
                out,
                &Record::Message {
                    t: round.t,
                    from: m.from,
                    to: m.to,
                    point: encode(&m.point),
                    omitted: m.omitted,
                },
            )?;
        }
        for (&process, p) in &round.states {
            emit(
                out,
                &Record::State {
                    t: round.t,
                    process,
                    point: encode(p),
                },
            )?;
        }
    }
    if let Some(s) = summary {
        emit(
            out,
            &Record::Summary {
                rounds: s.rounds,
                outcome: s.outcome.to_string(),
                termination: s.termination.to_string(),
                spread: s.spread.iter().map(format_rational).collect(),
                validity: s.validity,
                agreement: s.agreement,
                t_end: s.t_end.clone(),
                t_end_executed: s.t_end_executed,
            },
        )?;
    }
    Ok(())
}

pub fn read_trace(input: impl BufRead) -> Result<(ExecutionTrace, Option<TraceSummary>)> {
    let mut trace: Option<ExecutionTrace> = None;
    let mut summary = None;
    let mut declared_rounds = 0;
    for (k, line) in input.lines().enumerate() {
        let line_no = k + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record =
            serde_json::from_str(&line).map_err(|e| Error::parse(line_no, e.to_string()))?;
        if summary.is_some() {
            return Err(Error::parse(line_no, "record after summary"));
        }
        let bad = |m: &str| Error::parse(line_no, m.to_string());
        match record {
            Record::Header {
                scenario_hash,
                n,
                d,
                fault_free,
                termination,
                outcome,
                rounds,
            } => {
                if trace.is_some() {
                    return Err(bad("duplicate header"));
                }
                declared_rounds = rounds;
                trace = Some(ExecutionTrace {
                    scenario_hash,
                    n,
                    d,
                    fault_free,
                    termination: termination.parse().map_err(|e: Error| bad(&e.to_string()))?,
                    rounds: Vec::new(),
                    outcome: outcome.parse().map_err(|e: Error| bad(&e.to_string()))?,
                });
            }
            Record::Message {
                t,
                from,
                to,
                point,
                omitted,
            } => {
                let tr = trace.as_mut().ok_or_else(|| bad("message before header"))?;
                let round = round_slot(tr, t).ok_or_else(|| bad("rounds out of order"))?;
                if !round.states.is_empty() {
                    return Err(bad("message after the round's states"));
                }
                round.messages.push(Delivery {
                    from,
                    to,
                    point: decode(line_no, &point)?,
                    omitted,
                });
            }
            Record::State { t, process, point } => {
                let tr = trace.as_mut().ok_or_else(|| bad("state before header"))?;
                let round = round_slot(tr, t).ok_or_else(|| bad("rounds out of order"))?;
                if round.states.insert(process, decode(line_no, &point)?).is_some() {
                    return Err(bad("duplicate state record"));
                }
            }
            Record::Summary {
                rounds,
                outcome,
                termination,
                spread,
                validity,
                agreement,
                t_end,
                t_end_executed,
            } => {
                if trace.is_none() {
                    return Err(bad("summary before header"));
                }
                summary = Some(TraceSummary {
                    rounds,
                    outcome: outcome.parse().map_err(|e: Error| bad(&e.to_string()))?,
                    termination: termination.parse().map_err(|e: Error| bad(&e.to_string()))?,
                    spread: spread
                        .iter()
                        .map(|c| parse_rational(c).ok_or_else(|| bad("bad spread value")))
                        .collect::<Result<_>>()?,
                    validity,
                    agreement,
                    t_end,
                    t_end_executed,
                });
            }
        }
    }
    let trace = trace.ok_or_else(|| Error::parse(1, "empty trace"))?;
    if trace.rounds.is_empty() || trace.rounds_executed() != declared_rounds {
        return Err(Error::parse(1, "trace rounds do not match the header"));
    }
    Ok((trace, summary))
}

/// The record for round `t`, opening it if it is the next one.
fn round_slot(trace: &mut ExecutionTrace, t: u64) -> Option<&mut RoundRecord> {
    let next = trace.rounds.len() as u64;
    if t == next {
        trace.rounds.push(RoundRecord {
            t,
            messages: Vec::new(),
            states: BTreeMap::new(),
        });
    } else if t + 1 != next {
        return None;
    }
    trace.rounds.last_mut()
}
