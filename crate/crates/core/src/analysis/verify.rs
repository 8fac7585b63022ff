//! Post-hoc checks of execution traces.

use rayon::prelude::*;

use crate::geometry::{hull_membership, Point};
use crate::graph::ProcessId;
use crate::protocol::{ExecutionTrace, Scenario};
use crate::rational::{format_rational, parse_rational};
use crate::report::TextReport;
use crate::{Error, Rational, Result};

/// Hull-membership of every fault-free state in the hull of fault-free inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub states_checked: u64,
    /// `(t, process)` of every state outside the hull.
    pub violations: Vec<(u64, ProcessId)>,
}

impl ValidityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_text(&self) -> TextReport {
        let violations = if self.violations.is_empty() {
            "none".to_string()
        } else {
            self.violations
                .iter()
                .map(|(t, v)| format!("t{t}:p{v}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut r = TextReport::new();
        r.set("check", "validity")
            .set("verdict", verdict(self.passed()))
            .set("states_checked", self.states_checked)
            .set("violations", violations);
        r
    }

    pub fn from_text(report: &TextReport) -> Result<Self> {
        expect_check(report, "validity")?;
        let states_checked = report
            .require("states_checked")?
            .parse()
            .map_err(|_| Error::parse(0, "bad states_checked"))?;
        let violations = match report.require("violations")? {
            "none" => Vec::new(),
            text => text
                .split_whitespace()
                .map(|item| {
                    let parsed = item.strip_prefix('t').and_then(|rest| {
                        let (t, v) = rest.split_once(":p")?;
                        Some((t.parse().ok()?, v.parse().ok()?))
                    });
                    parsed.ok_or_else(|| Error::parse(0, format!("bad violation `{item}`")))
                })
                .collect::<Result<_>>()?,
        };
        let out = ValidityReport {
            states_checked,
            violations,
        };
        check_verdict(report, out.passed())?;
        Ok(out)
    }
}

/// Final per-coordinate spread against epsilon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgreementReport {
    pub epsilon: Rational,
    pub spread: Vec<Rational>,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.spread.iter().all(|s| *s < self.epsilon)
    }

    pub fn to_text(&self) -> TextReport {
        let spread: Vec<String> = self.spread.iter().map(format_rational).collect();
        let mut r = TextReport::new();
        r.set("check", "epsilon-agreement")
            .set("verdict", verdict(self.passed()))
            .set("epsilon", format_rational(&self.epsilon))
            .set("spread", spread.join(", "));
        r
    }

    pub fn from_text(report: &TextReport) -> Result<Self> {
        expect_check(report, "epsilon-agreement")?;
        let rational = |text: &str| {
            parse_rational(text).ok_or_else(|| Error::parse(0, format!("bad rational `{text}`")))
        };
        let epsilon = rational(report.require("epsilon")?)?;
        let spread = report
            .require("spread")?
            .split(',')
            .map(|s| rational(s.trim()))
            .collect::<Result<_>>()?;
        let out = AgreementReport { epsilon, spread };
        check_verdict(report, out.passed())?;
        Ok(out)
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn expect_check(report: &TextReport, name: &str) -> Result<()> {
    match report.require("check")? {
        c if c == name => Ok(()),
        other => Err(Error::parse(0, format!("expected a {name} report, got `{other}`"))),
    }
}

fn check_verdict(report: &TextReport, pass: bool) -> Result<()> {
    if report.require("verdict")? != verdict(pass) {
        return Err(Error::parse(0, "verdict does not match the report body"));
    }
    Ok(())
}

/// Checks every state of every round against the hull of the scenario's
/// fault-free inputs.
pub fn verify_validity(trace: &ExecutionTrace, scenario: &Scenario) -> Result<ValidityReport> {
    if trace.scenario_hash != scenario.hash() {
        return Err(Error::usage("trace was not produced from this scenario"));
    }
    let inputs: Vec<Point> = scenario.inputs.values().cloned().collect();
    let states: Vec<(u64, ProcessId, &Point)> = trace
        .rounds
        .iter()
        .flat_map(|r| r.states.iter().map(move |(&v, p)| (r.t, v, p)))
        .collect();
    let outside = states
        .par_iter()
        .map(|&(t, v, p)| hull_membership(p, &inputs).map(|inside| (!inside).then_some((t, v))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ValidityReport {
        states_checked: states.len() as u64,
        violations: outside.into_iter().flatten().collect(),
    })
}

/// Compares the per-coordinate spread of the final fault-free states with
/// `epsilon` (strictly).
pub fn verify_epsilon_agreement(trace: &ExecutionTrace, epsilon: &Rational) -> AgreementReport {
    AgreementReport {
        epsilon: epsilon.clone(),
        spread: trace.final_spread(),
    }
}
