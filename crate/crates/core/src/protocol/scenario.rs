//! Scenario files.
//!
//! ```text
//! [graph]
//! complete 4
//!
//! [params]
//! d = 1
//! f = 1
//! epsilon = 1/100
//! mu = 0
//! U = 2
//! seed = 7
//!
//! [inputs]
//! node 1 = (0)
//! node 2 = (1)
//! node 3 = (2)
//!
//! [faults]
//! node 4 strategy silent
//!
//! [termination]
//! empirical 10000
//! ```
//!
//! Fault strategies: `silent`, `random`, `equivocate <to>=<point> ...`,
//! `fixed-partition <to>=<block> ...` and `custom <round>:<to>=<point> ...`.
//! Termination: `paper`, `fixed <k>` or `empirical [max_rounds]`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::Signed;
use sha2::{Digest, Sha256};

use super::AdversaryStrategy;
use crate::geometry::Point;
use crate::graph::{parse_graph_lines, Digraph, GraphFile, ProcessId, VertexSet};
use crate::rational::{format_rational, parse_rational};
use crate::{Error, Rational, Result};

/// Default cap on rounds for `empirical` termination.
pub const DEFAULT_MAX_ROUNDS: u64 = 10_000;

/// When an execution stops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Run exactly `t_end` rounds.
    PaperBound,
    /// Stop at the first round whose fault-free states are within epsilon in
    /// every coordinate (checked from round 0), or at `max_rounds`.
    EmpiricalSpread { max_rounds: u64 },
    FixedRounds(u64),
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::PaperBound => f.write_str("paper"),
            Termination::EmpiricalSpread { max_rounds } => write!(f, "empirical {max_rounds}"),
            Termination::FixedRounds(k) => write!(f, "fixed {k}"),
        }
    }
}

impl FromStr for Termination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let number = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| Error::usage(format!("bad round count `{t}`")))
        };
        match tokens.as_slice() {
            ["paper"] => Ok(Termination::PaperBound),
            ["fixed", k] => Ok(Termination::FixedRounds(number(k)?)),
            ["empirical"] => Ok(Termination::EmpiricalSpread {
                max_rounds: DEFAULT_MAX_ROUNDS,
            }),
            ["empirical", k] => Ok(Termination::EmpiricalSpread {
                max_rounds: number(k)?,
            }),
            _ => Err(Error::usage(format!("unknown termination `{}`", s.trim()))),
        }
    }
}

/// One execution setup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub graph: GraphFile,
    pub d: usize,
    pub f: usize,
    pub epsilon: Rational,
    pub mu: Rational,
    pub upper: Rational,
    /// Inputs of the fault-free processes.
    pub inputs: BTreeMap<ProcessId, Point>,
    /// Faulty processes and their behaviour.
    pub faults: BTreeMap<ProcessId, AdversaryStrategy>,
    pub termination: Termination,
    pub seed: u64,
}

impl Scenario {
    pub fn digraph(&self) -> &Digraph {
        &self.graph.graph
    }

    pub fn n(&self) -> usize {
        self.graph.graph.n()
    }

    pub fn fault_set(&self) -> VertexSet {
        VertexSet::from_ids(self.faults.keys().copied())
    }

    pub fn fault_free(&self) -> Vec<ProcessId> {
        let faults = self.fault_set();
        (1..=self.n()).filter(|v| !faults.contains(*v)).collect()
    }

    /// Hex SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_string().as_bytes()))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.d == 0 {
            return Err(Error::usage("dimension d must be at least 1"));
        }
        if !self.epsilon.is_positive() {
            return Err(Error::usage("epsilon must be positive"));
        }
        if self.mu > self.upper {
            return Err(Error::usage("mu must not exceed U"));
        }
        if self.faults.len() > self.f {
            return Err(Error::usage(format!(
                "{} faulty processes exceed f = {}",
                self.faults.len(),
                self.f
            )));
        }
        let in_range = |v: ProcessId| (1..=n).contains(&v);
        for (&v, strategy) in &self.faults {
            if !in_range(v) {
                return Err(Error::usage(format!("faulty process {v} outside 1..={n}")));
            }
            let targets: Vec<ProcessId> = match strategy {
                AdversaryStrategy::Equivocate(t) => {
                    for p in t.values() {
                        self.check_dim(p)?;
                    }
                    t.keys().copied().collect()
                }
                AdversaryStrategy::FixedPartition(t) => {
                    if let Some(bad) = t.values().find(|&&i| i > self.d) {
                        return Err(Error::usage(format!(
                            "block index {bad} exceeds d = {}",
                            self.d
                        )));
                    }
                    t.keys().copied().collect()
                }
                AdversaryStrategy::Custom(t) => {
                    for p in t.values() {
                        self.check_dim(p)?;
                    }
                    t.keys().map(|&(_, to)| to).collect()
                }
                AdversaryStrategy::Silent | AdversaryStrategy::RandomInRange => Vec::new(),
            };
            if let Some(bad) = targets.into_iter().find(|&t| !in_range(t)) {
                return Err(Error::usage(format!("target {bad} outside 1..={n}")));
            }
        }
        let fault_free = self.fault_free();
        for v in &fault_free {
            let point = self
                .inputs
                .get(v)
                .ok_or_else(|| Error::usage(format!("no input for fault-free process {v}")))?;
            self.check_dim(point)?;
            if point.coords().iter().any(|c| *c < self.mu || *c > self.upper) {
                return Err(Error::usage(format!(
                    "input {point} of process {v} leaves [{}, {}]",
                    format_rational(&self.mu),
                    format_rational(&self.upper)
                )));
            }
        }
        if self.inputs.len() != fault_free.len() {
            return Err(Error::usage("inputs given for faulty or unknown processes"));
        }
        Ok(())
    }

    fn check_dim(&self, p: &Point) -> Result<()> {
        if p.dim() != self.d {
            return Err(Error::usage(format!("point {p} is not {}-dimensional", self.d)));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: BTreeMap<&str, Vec<(usize, &str)>> = BTreeMap::new();
        let mut current: Option<&str> = None;
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
                let name = name.trim();
                if !["graph", "params", "inputs", "faults", "termination"].contains(&name) {
                    return Err(Error::parse(line_no, format!("unknown section [{name}]")));
                }
                if sections.contains_key(name) {
                    return Err(Error::parse(line_no, format!("duplicate section [{name}]")));
                }
                sections.insert(name, Vec::new());
                current = Some(name);
                continue;
            }
            if body.is_empty() {
                continue;
            }
            match current {
                Some(name) => sections.get_mut(name).expect("opened").push((line_no, body)),
                None => return Err(Error::parse(line_no, "content before the first section")),
            }
        }
        let last_line = text.lines().count().max(1);
        let take = |name: &str| {
            sections
                .get(name)
                .cloned()
                .ok_or_else(|| Error::parse(last_line, format!("missing section [{name}]")))
        };

        let graph = parse_graph_lines(take("graph")?)?;
        let n = graph.graph.n();

        let mut params: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (line_no, body) in take("params")? {
            let (key, value) = match body.split_once('=') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => body
                    .split_once(char::is_whitespace)
                    .map(|(k, v)| (k.trim(), v.trim()))
                    .ok_or_else(|| Error::parse(line_no, format!("expected `key value`, got `{body}`")))?,
            };
            if !["d", "f", "epsilon", "mu", "U", "seed"].contains(&key) {
                return Err(Error::parse(line_no, format!("unknown parameter `{key}`")));
            }
            if params.insert(key.to_string(), (line_no, value.to_string())).is_some() {
                return Err(Error::parse(line_no, format!("duplicate parameter `{key}`")));
            }
        }
        let param = |key: &str| {
            params
                .get(key)
                .cloned()
                .ok_or_else(|| Error::parse(last_line, format!("missing parameter `{key}`")))
        };
        let integer = |key: &str| -> Result<u64> {
            let (line_no, v) = param(key)?;
            v.parse()
                .map_err(|_| Error::parse(line_no, format!("`{key}` must be a non-negative integer")))
        };
        let rational = |key: &str| -> Result<Rational> {
            let (line_no, v) = param(key)?;
            parse_rational(&v).ok_or_else(|| Error::parse(line_no, format!("`{key}` is not a rational")))
        };
        let d = integer("d")? as usize;
        let f = integer("f")? as usize;
        let epsilon = rational("epsilon")?;
        let mu = rational("mu")?;
        let upper = rational("U")?;
        let seed = if params.contains_key("seed") { integer("seed")? } else { 0 };

        let node = |line_no: usize, label: &str| {
            graph
                .resolve(label)
                .ok_or_else(|| Error::parse(line_no, format!("unknown process `{label}`")))
        };
        let point = |line_no: usize, text: &str| {
            text.parse::<Point>()
                .map_err(|e| Error::parse(line_no, e.to_string()))
        };

        let mut inputs = BTreeMap::new();
        for (line_no, body) in take("inputs")? {
            let rest = body
                .strip_prefix("node ")
                .ok_or_else(|| Error::parse(line_no, "expected `node <id> = <point>`"))?;
            let (label, value) = rest
                .split_once('=')
                .ok_or_else(|| Error::parse(line_no, "expected `node <id> = <point>`"))?;
            let v = node(line_no, label.trim())?;
            if inputs.insert(v, point(line_no, value)?).is_some() {
                return Err(Error::parse(line_no, format!("duplicate input for `{}`", label.trim())));
            }
        }

        let mut faults = BTreeMap::new();
        if let Some(lines) = sections.get("faults") {
            for &(line_no, body) in lines {
                let tokens = tokenize(body).map_err(|m| Error::parse(line_no, m))?;
                let [kw, label, strategy_kw, name, args @ ..] = tokens.as_slice() else {
                    return Err(Error::parse(line_no, "expected `node <id> strategy <name> <args>`"));
                };
                if kw != "node" || strategy_kw != "strategy" {
                    return Err(Error::parse(line_no, "expected `node <id> strategy <name> <args>`"));
                }
                let v = node(line_no, label)?;
                let no_args = |s: AdversaryStrategy| {
                    if args.is_empty() {
                        Ok(s)
                    } else {
                        Err(Error::parse(line_no, format!("`{name}` takes no arguments")))
                    }
                };
                let strategy = match name.as_str() {
                    "silent" => no_args(AdversaryStrategy::Silent)?,
                    "random" => no_args(AdversaryStrategy::RandomInRange)?,
                    "equivocate" => {
                        let mut table = BTreeMap::new();
                        for arg in args {
                            let (to, p) = split_pair(line_no, arg)?;
                            table.insert(node(line_no, to)?, point(line_no, p)?);
                        }
                        AdversaryStrategy::Equivocate(table)
                    }
                    "fixed-partition" => {
                        let mut table = BTreeMap::new();
                        for arg in args {
                            let (to, block) = split_pair(line_no, arg)?;
                            let block = block
                                .parse()
                                .map_err(|_| Error::parse(line_no, format!("bad block index `{block}`")))?;
                            table.insert(node(line_no, to)?, block);
                        }
                        AdversaryStrategy::FixedPartition(table)
                    }
                    "custom" => {
                        let mut table = BTreeMap::new();
                        for arg in args {
                            let (key, p) = split_pair(line_no, arg)?;
                            let (round, to) = key.split_once(':').ok_or_else(|| {
                                Error::parse(line_no, format!("expected `<round>:<to>`, got `{key}`"))
                            })?;
                            let round: u64 = round
                                .parse()
                                .map_err(|_| Error::parse(line_no, format!("bad round `{round}`")))?;
                            table.insert((round, node(line_no, to)?), point(line_no, p)?);
                        }
                        AdversaryStrategy::Custom(table)
                    }
                    other => return Err(Error::parse(line_no, format!("unknown strategy `{other}`"))),
                };
                if faults.insert(v, strategy).is_some() {
                    return Err(Error::parse(line_no, format!("process `{label}` listed twice")));
                }
            }
        }
        // inputs of faulty processes are ignored
        inputs.retain(|v, _| !faults.contains_key(v));

        let termination = match take("termination")?.as_slice() {
            [(line_no, body)] => body
                .parse::<Termination>()
                .map_err(|e| Error::parse(*line_no, e.to_string()))?,
            [] => return Err(Error::parse(last_line, "empty [termination] section")),
            [_, (line_no, _), ..] => {
                return Err(Error::parse(*line_no, "[termination] takes a single line"))
            }
        };

        let scenario = Scenario {
            graph,
            d,
            f,
            epsilon,
            mu,
            upper,
            inputs,
            faults,
            termination,
            seed,
        };
        debug_assert!(scenario.n() == n);
        scenario
            .validate()
            .map_err(|e| Error::parse(last_line, e.to_string()))?;
        Ok(scenario)
    }
}

fn split_pair(line_no: usize, arg: &str) -> Result<(&str, &str)> {
    arg.split_once('=')
        .ok_or_else(|| Error::parse(line_no, format!("expected `<key>=<value>`, got `{arg}`")))
}

/// Splits on whitespace outside parentheses.
fn tokenize(line: &str) -> std::result::Result<Vec<String>, String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    for ch in line.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| "unbalanced `)`".to_string())?;
                current.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c if c.is_whitespace() => {}
            c => current.push(c),
        }
    }
    if depth != 0 {
        return Err("unbalanced `(`".into());
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    Ok(tokens)
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::parse(s)
    }
}

impl fmt::Display for Scenario {
    /// Canonical text; parses back to an equal scenario.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = |v: ProcessId| self.graph.label(v);
        writeln!(out, "[graph]")?;
        write!(out, "{}", self.graph)?;
        writeln!(out, "\n[params]")?;
        writeln!(out, "d = {}", self.d)?;
        writeln!(out, "f = {}", self.f)?;
        writeln!(out, "epsilon = {}", format_rational(&self.epsilon))?;
        writeln!(out, "mu = {}", format_rational(&self.mu))?;
        writeln!(out, "U = {}", format_rational(&self.upper))?;
        writeln!(out, "seed = {}", self.seed)?;
        writeln!(out, "\n[inputs]")?;
        for (&v, p) in &self.inputs {
            writeln!(out, "node {} = {p}", label(v))?;
        }
        writeln!(out, "\n[faults]")?;
        for (&v, strategy) in &self.faults {
            write!(out, "node {} strategy {}", label(v), strategy.name())?;
            match strategy {
                AdversaryStrategy::Equivocate(t) => {
                    for (&to, p) in t {
                        write!(out, " {}={p}", label(to))?;
                    }
                }
                AdversaryStrategy::FixedPartition(t) => {
                    for (&to, i) in t {
                        write!(out, " {}={i}", label(to))?;
                    }
                }
                AdversaryStrategy::Custom(t) => {
                    for (&(round, to), p) in t {
                        write!(out, " {round}:{}={p}", label(to))?;
                    }
                }
                AdversaryStrategy::Silent | AdversaryStrategy::RandomInRange => {}
            }
            writeln!(out)?;
        }
        writeln!(out, "\n[termination]")?;
        writeln!(out, "{}", self.termination)
    }
}
