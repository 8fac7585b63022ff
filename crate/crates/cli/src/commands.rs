use std::fmt;
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use byzvec::analysis::{verify_epsilon_agreement, verify_validity};
use byzvec::conditions::{
    check_degree_bound, check_nc_with, check_population_bound, check_sc_via_reduced_with,
    check_sc_with, CheckOptions, ConditionReport, Solvability, Verdict,
};
use byzvec::geometry::{hull_membership, tverberg_point, Point};
use byzvec::graph::{parse_graph, GraphFile};
use byzvec::protocol::{
    paper_bounds, read_trace, run_execution_with, scenario_adversaries, write_trace,
    ExecutionTrace, Outcome, RunOptions, Scenario, Termination, TraceSummary,
};
use byzvec::rational::{format_rational, parse_rational};
use byzvec::report::TextReport;
use byzvec::{Error, Rational};
use num::ToPrimitive;
use rayon::prelude::*;

use crate::{CheckArgs, GraphArgs, SimulateArgs, Which};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    OverBudget = 3,
}

/// A library error together with the file it concerns.
#[derive(Debug)]
pub struct CliError {
    path: Option<PathBuf>,
    source: Error,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self.source {
            Error::Budget(_) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.path {
            Some(p) => write!(f, "{}: {}", p.display(), self.source),
            None => write!(f, "{}", self.source),
        }
    }
}

impl From<Error> for CliError {
    fn from(source: Error) -> Self {
        CliError { path: None, source }
    }
}

type CliResult<T> = Result<T, CliError>;

fn in_file<T>(path: &Path, r: byzvec::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError {
        path: Some(path.to_path_buf()),
        source,
    })
}

fn read(path: &Path) -> CliResult<String> {
    in_file(path, fs::read_to_string(path).map_err(Error::from))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    in_file(path, fs::write(path, text).map_err(Error::from))
}

fn load_graph(path: &Path) -> CliResult<GraphFile> {
    in_file(path, parse_graph(&read(path)?))
}

fn load_scenario(path: &Path) -> CliResult<Scenario> {
    in_file(path, Scenario::parse(&read(path)?))
}

fn rational(name: &str, text: &str) -> CliResult<Rational> {
    parse_rational(text)
        .ok_or_else(|| Error::Usage(format!("--{name}: `{text}` is not a rational")).into())
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

/// Prints reports separated by blank lines and optionally saves them.
fn emit(reports: &[TextReport], out: Option<&Path>) -> CliResult<()> {
    let text = reports
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join("\n");
    print!("{text}");
    if let Some(path) = out {
        write(path, &text)?;
    }
    Ok(())
}

pub fn check(args: &GraphArgs, which: Which, check: &CheckArgs) -> CliResult<Status> {
    let file = load_graph(&args.graph)?;
    let g = &file.graph;
    let opts = CheckOptions {
        budget: check.budget,
    };
    let mut reports: Vec<ConditionReport> = Vec::new();
    if which != Which::Sc {
        reports.push(check_nc_with(g, args.d, args.f, &opts));
    }
    if which != Which::Nc {
        reports.push(if check.via_reduced {
            check_sc_via_reduced_with(g, args.d, args.f, &opts)
        } else {
            check_sc_with(g, args.d, args.f, &opts)
        });
    }
    let mut texts: Vec<TextReport> = reports.iter().map(|r| r.to_text()).collect();
    if let [nc, sc] = reports.as_slice() {
        let mut summary = TextReport::new();
        summary.set("solvability", Solvability::classify(nc.verdict, sc.verdict));
        texts.push(summary);
    }
    emit(&texts, check.out.as_deref())?;
    let status = if reports.iter().any(|r| r.verdict == Verdict::Fails) {
        Status::Fail
    } else if reports.iter().any(|r| r.verdict == Verdict::NotEvaluated) {
        Status::OverBudget
    } else {
        Status::Pass
    };
    Ok(status)
}

/// Simulation outcome for one scenario.
struct Run {
    trace: ExecutionTrace,
    summary: TraceSummary,
    report: TextReport,
}

fn run_scenario(scenario: &Scenario, strict_paper: bool, max_paper_rounds: u64) -> byzvec::Result<Run> {
    let mut scenario = scenario.clone();
    if strict_paper {
        scenario.termination = Termination::PaperBound;
    }
    let bounds = paper_bounds(
        scenario.digraph(),
        scenario.d,
        scenario.f,
        &scenario.mu,
        &scenario.upper,
        &scenario.epsilon,
    )?;
    let trace = run_execution_with(
        &scenario,
        scenario_adversaries(&scenario),
        RunOptions { max_paper_rounds },
    )?;
    let validity = verify_validity(&trace, &scenario)?;
    let agreement = verify_epsilon_agreement(&trace, &scenario.epsilon);
    let t_end = match &bounds.t_end {
        Ok(t) => t.to_string(),
        Err(why) => format!("unavailable ({why}); log10(t_end) ~ {:.3e}", bounds.t_end_log10),
    };
    let t_end_executed = scenario.termination == Termination::PaperBound;
    let summary = TraceSummary {
        rounds: trace.rounds_executed(),
        outcome: trace.outcome,
        termination: scenario.termination,
        spread: trace.final_spread(),
        validity: Some(validity.passed()),
        agreement: Some(agreement.passed()),
        t_end: t_end.clone(),
        t_end_executed,
    };
    let spread: Vec<String> = summary.spread.iter().map(format_rational).collect();
    let termination_note = match scenario.termination {
        Termination::PaperBound => "paper bound (t_end rounds)".to_string(),
        Termination::EmpiricalSpread { max_rounds } => format!(
            "empirical spread, cap {max_rounds} (artifact extension: stops once every coordinate spread is below epsilon)"
        ),
        Termination::FixedRounds(k) => format!("fixed {k} rounds"),
    };
    let mut report = TextReport::new();
    report
        .set("scenario_hash", &trace.scenario_hash)
        .set("termination", termination_note)
        .set("outcome", trace.outcome)
        .set("rounds", trace.rounds_executed())
        .set("spread", spread.join(", "))
        .set("validity", pass_fail(validity.passed()))
        .set("agreement", pass_fail(agreement.passed()))
        .set("beta", format_rational(&bounds.beta))
        .set("r", &bounds.reduced_graphs)
        .set("t_end", t_end)
        .set(
            "t_end_executed",
            if t_end_executed { "yes" } else { "no (not executed)" },
        );
    if !validity.passed() {
        report.set("validity_violations", validity.to_text().get("violations").unwrap_or(""));
    }
    Ok(Run {
        trace,
        summary,
        report,
    })
}

fn run_status(run: &Run) -> Status {
    let s = &run.summary;
    let ok = s.validity == Some(true)
        && s.agreement == Some(true)
        && run.trace.outcome != Outcome::CapReached;
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn save_trace(path: &Path, run: &Run) -> CliResult<()> {
    let file = in_file(path, fs::File::create(path).map_err(Error::from))?;
    let mut out = BufWriter::new(file);
    in_file(path, write_trace(&mut out, &run.trace, Some(&run.summary)))?;
    in_file(path, out.flush().map_err(Error::from))
}

fn spread_csv(trace: &ExecutionTrace) -> String {
    let mut csv = String::from("t,coordinate,spread,approx\n");
    for (t, k, s) in trace.spread_table() {
        let approx = s.to_f64().unwrap_or(f64::NAN);
        csv.push_str(&format!("{t},{k},{},{approx:e}\n", format_rational(&s)));
    }
    csv
}

pub fn simulate(args: &SimulateArgs) -> CliResult<Status> {
    if let Some(dir) = &args.sweep {
        return sweep(dir, args.out_dir.as_deref().unwrap_or(dir), args);
    }
    let path = args.scenario.as_deref().expect("clap enforces --scenario");
    let scenario = load_scenario(path)?;
    let run = in_file(path, run_scenario(&scenario, args.strict_paper, args.max_paper_rounds))?;
    if let Some(trace_path) = &args.trace {
        save_trace(trace_path, &run)?;
    }
    if let Some(table) = &args.spread_table {
        write(table, &spread_csv(&run.trace))?;
    }
    emit(std::slice::from_ref(&run.report), None)?;
    Ok(run_status(&run))
}

fn sweep(dir: &Path, out_dir: &Path, args: &SimulateArgs) -> CliResult<Status> {
    let listing = in_file(dir, fs::read_dir(dir).map_err(Error::from))?;
    let mut files: Vec<PathBuf> = listing
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "scn"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Usage(format!("no *.scn files in {}", dir.display())).into());
    }
    in_file(out_dir, fs::create_dir_all(out_dir).map_err(Error::from))?;
    let results: Vec<(PathBuf, CliResult<Status>)> = files
        .par_iter()
        .map(|path| {
            let outcome = (|| {
                let scenario = load_scenario(path)?;
                let run = in_file(path, run_scenario(&scenario, args.strict_paper, args.max_paper_rounds))?;
                let stem = path.file_stem().unwrap_or_default().to_string_lossy();
                save_trace(&out_dir.join(format!("{stem}.trace.jsonl")), &run)?;
                write(&out_dir.join(format!("{stem}.summary.txt")), &run.report.to_string())?;
                write(&out_dir.join(format!("{stem}.spread.csv")), &spread_csv(&run.trace))?;
                Ok(run_status(&run))
            })();
            (path.clone(), outcome)
        })
        .collect();
    let mut worst = Status::Pass;
    let mut error_code = None;
    for (path, outcome) in results {
        match outcome {
            Ok(status) => {
                println!("{}: {}", path.display(), pass_fail(status == Status::Pass));
                worst = worst.max(status);
            }
            Err(e) => {
                println!("{}: error: {e}", path.display());
                error_code = error_code.max(Some(e.exit_code()));
            }
        }
    }
    match error_code {
        Some(code) => Err(CliError {
            path: Some(dir.to_path_buf()),
            source: if code == 3 {
                Error::Budget("some scenarios exceeded a budget".into())
            } else {
                Error::Usage("some scenarios could not be run".into())
            },
        }),
        None => Ok(worst),
    }
}

pub fn verify(trace_path: &Path, scenario_path: &Path, out: Option<&Path>) -> CliResult<Status> {
    let scenario = load_scenario(scenario_path)?;
    let file = in_file(trace_path, fs::File::open(trace_path).map_err(Error::from))?;
    let (trace, _) = in_file(trace_path, read_trace(BufReader::new(file)))?;
    let validity = in_file(trace_path, verify_validity(&trace, &scenario))?;
    let agreement = verify_epsilon_agreement(&trace, &scenario.epsilon);
    emit(&[validity.to_text(), agreement.to_text()], out)?;
    Ok(if validity.passed() && agreement.passed() {
        Status::Pass
    } else {
        Status::Fail
    })
}

pub fn tverberg(f: usize, points_file: Option<&Path>, inline: &[String]) -> CliResult<Status> {
    let mut points = Vec::new();
    if let Some(path) = points_file {
        for (k, line) in read(path)?.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let p = body.parse::<Point>().map_err(|e| CliError {
                path: Some(path.to_path_buf()),
                source: Error::Parse {
                    line: k + 1,
                    message: e.to_string(),
                },
            })?;
            points.push(p);
        }
    }
    for text in inline {
        points.push(text.parse::<Point>()?);
    }
    let result = tverberg_point(&points, f)?;
    let mut in_every_hull = true;
    for part in &result.partition {
        in_every_hull &= hull_membership(&result.point, part)?;
    }
    let parts: Vec<String> = result
        .slots
        .iter()
        .map(|slots| {
            let members: Vec<String> = slots.iter().map(|&i| points[i].to_string()).collect();
            format!("{{{}}}", members.join(" "))
        })
        .collect();
    let mut report = TextReport::new();
    report
        .set("points", points.len())
        .set("f", f)
        .set("tverberg_point", &result.point)
        .set("partition", parts.join(" | "))
        .set("in_every_hull", pass_fail(in_every_hull));
    emit(&[report], None)?;
    Ok(if in_every_hull { Status::Pass } else { Status::Fail })
}

pub fn bounds(args: &GraphArgs, mu: &str, upper: &str, epsilon: &str) -> CliResult<Status> {
    let file = load_graph(&args.graph)?;
    let g = &file.graph;
    let (d, f) = (args.d, args.f);
    let mu = rational("mu", mu)?;
    let upper = rational("upper", upper)?;
    let epsilon = rational("epsilon", epsilon)?;
    let population = check_population_bound(g.n(), d, f);
    let degree = check_degree_bound(g, d, f);
    let b = paper_bounds(g, d, f, &mu, &upper, &epsilon)?;
    let doubled = paper_bounds(g, d, f, &mu, &upper, &(&epsilon * Rational::from_integer(2.into())))?;
    let mut report = TextReport::new();
    report
        .set("n", g.n())
        .set("population_bound", format!("{} (n >= (d+2)f+1 = {})", pass_fail(population), (d + 2) * f + 1))
        .set(
            "degree_bound",
            format!("{} (min in-degree {} >= (d+1)f+1 = {})", pass_fail(degree), g.min_in_degree(), (d + 1) * f + 1),
        )
        .set("beta", format_rational(&b.beta))
        .set("r", &b.reduced_graphs)
        .set("rounds_per_block", &b.block_len);
    let status = match (&b.t_end, &doubled.t_end) {
        (Ok(t), Ok(t2)) => {
            report
                .set("t_end", t)
                .set("t_end_at_2epsilon", t2)
                .set("monotone_in_epsilon", if t2 <= t { "yes" } else { "no" });
            Status::Pass
        }
        (Ok(t), Err(_)) => {
            report.set("t_end", t);
            Status::Pass
        }
        (Err(why), _) => {
            report
                .set("t_end", format!("unavailable ({why})"))
                .set("t_end_log10_estimate", format!("{:.6e}", b.t_end_log10));
            Status::OverBudget
        }
    };
    emit(&[report], None)?;
    Ok(status)
}
