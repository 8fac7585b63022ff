//! Graph text format.
//!
//! ```text
//! # comments run to end of line
//! n 4
//! edge 1 2
//! edge 2 1
//! complete 4      # shorthand for every edge of K_4
//! ```
//!
//! Endpoints are either all integers in `1..=n`, or arbitrary labels that are
//! assigned ids in order of first appearance.

use std::fmt;

use super::{Digraph, ProcessId};
use crate::{Error, Result};

/// A parsed graph together with the textual label of every process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Digraph,
    /// `labels[v-1]` is the label of process `v`.
    pub labels: Vec<String>,
}

impl GraphFile {
    pub fn numeric(graph: Digraph) -> Self {
        let labels = (1..=graph.n()).map(|v| v.to_string()).collect();
        GraphFile { graph, labels }
    }

    /// Resolve a label (or, failing that, a numeric id) to a process id.
    pub fn resolve(&self, label: &str) -> Option<ProcessId> {
        if let Some(k) = self.labels.iter().position(|l| l == label) {
            return Some(k + 1);
        }
        label
            .parse::<ProcessId>()
            .ok()
            .filter(|v| (1..=self.graph.n()).contains(v))
    }

    pub fn label(&self, v: ProcessId) -> &str {
        &self.labels[v - 1]
    }
}

/// Parse the graph format.
pub fn parse_graph(text: &str) -> Result<GraphFile> {
    parse_graph_lines(text.lines().enumerate().map(|(k, l)| (k + 1, l)))
}

/// Parse `(line_number, text)` pairs, so a graph embedded in a larger file
/// reports positions relative to that file.
pub(crate) fn parse_graph_lines<'a>(
    lines: impl IntoIterator<Item = (usize, &'a str)>,
) -> Result<GraphFile> {
    let mut n: Option<usize> = None;
    let mut complete = false;
    let mut raw_edges: Vec<(usize, String, String)> = Vec::new();
    let mut last_line = 0;

    for (line_no, line) in lines {
        last_line = line_no;
        let body = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["n", count] | ["complete", count] => {
                let count: usize = count
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad process count `{count}`")))?;
                if let Some(prev) = n {
                    if prev != count {
                        return Err(Error::parse(
                            line_no,
                            format!("process count {count} conflicts with earlier {prev}"),
                        ));
                    }
                }
                n = Some(count);
                if tokens[0] == "complete" {
                    complete = true;
                }
            }
            ["edge", from, to] => {
                if n.is_none() {
                    return Err(Error::parse(line_no, "`edge` before `n <count>` header"));
                }
                raw_edges.push((line_no, from.to_string(), to.to_string()));
            }
            _ => {
                return Err(Error::parse(
                    line_no,
                    format!("unrecognised graph line `{}`", body.trim()),
                ))
            }
        }
    }

    let n = n.ok_or_else(|| Error::parse(last_line.max(1), "missing `n <count>` header"))?;
    let mut graph = if complete {
        Digraph::complete(n)
    } else {
        Digraph::new(n)
    }
    .map_err(|e| Error::parse(last_line.max(1), e.to_string()))?;

    let numeric = raw_edges.iter().all(|(_, a, b)| {
        [a, b]
            .iter()
            .all(|t| t.parse::<usize>().is_ok_and(|v| (1..=n).contains(&v)))
    });
    let mut labels: Vec<String> = (1..=n).map(|v| v.to_string()).collect();
    let mut assigned: Vec<String> = Vec::new();
    let mut id_of = |label: &str, line_no: usize| -> Result<ProcessId> {
        if numeric {
            return Ok(label.parse().expect("checked numeric"));
        }
        if let Some(k) = assigned.iter().position(|l| l == label) {
            return Ok(k + 1);
        }
        if assigned.len() == n {
            return Err(Error::parse(
                line_no,
                format!("label `{label}` exceeds the declared {n} processes"),
            ));
        }
        assigned.push(label.to_string());
        Ok(assigned.len())
    };
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (line_no, from, to) in &raw_edges {
        let a = id_of(from, *line_no)?;
        let b = id_of(to, *line_no)?;
        edges.push((*line_no, a, b));
    }
    for (line_no, a, b) in edges {
        graph
            .add_edge(a, b)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
    }
    if !numeric {
        for (k, label) in assigned.into_iter().enumerate() {
            labels[k] = label;
        }
    }
    Ok(GraphFile { graph, labels })
}

impl fmt::Display for GraphFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.graph.n())?;
        for (from, to) in self.graph.edges() {
            writeln!(f, "edge {} {}", self.label(from), self.label(to))?;
        }
        Ok(())
    }
}
