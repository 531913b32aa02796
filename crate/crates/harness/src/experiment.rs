//! Running solvers against instances and writing the CSV outputs.
//!
//! A benchmark is a grid of (instance, method) cells. Cells run in parallel,
//! each producing one trace CSV; the aggregator then writes a single
//! `summary.csv`. All numeric formatting is locale independent, and the only
//! nondeterministic column is `elapsed_seconds`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use robustfw_core::config::{Method, SolverConfig};
use robustfw_core::solvers::{solve, RunResult};
use robustfw_core::trace::SolverTrace;

use crate::error::{ErrorKind, HarnessError};
use crate::instance::InstanceFile;

pub const TRACE_HEADER: &str = "iteration,lmo_calls,elapsed_seconds,f_value,f_mu_value,dual_bound";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const SUMMARY_HEADER: &str =
    "instance,method,status,termination,f_best,dual_bound,iterations,lmo_calls,elapsed_seconds,trace_file,error";

/// Solver knobs shared by every cell of a run.
#[derive(Clone, Copy, Debug)]
pub struct RunSettings {
    pub epsilon: f64,
    pub mu_override: Option<f64>,
    pub max_iters: usize,
    pub max_lmo_calls: usize,
    pub conv_hull_period: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        let base = SolverConfig::default();
        Self {
            epsilon: base.epsilon,
            mu_override: base.mu_override,
            max_iters: base.max_iters,
            max_lmo_calls: base.max_lmo_calls,
            conv_hull_period: base.conv_hull_period,
        }
    }
}

impl RunSettings {
    pub fn to_config(self, method: Method) -> SolverConfig {
        SolverConfig {
            method,
            epsilon: self.epsilon,
            mu_override: self.mu_override,
            max_iters: self.max_iters,
            max_lmo_calls: self.max_lmo_calls,
            conv_hull_period: self.conv_hull_period,
            ..SolverConfig::default()
        }
    }
}

/// One (instance, method) pair scheduled for a benchmark run.
pub struct BenchCell {
    pub name: String,
    pub file: InstanceFile,
    pub method: Method,
}

/// What a finished cell contributed to the summary.
pub struct CellOutcome {
    pub name: String,
    pub method: Method,
    pub trace_file: String,
    pub result: Result<RunResult, HarnessError>,
}

/// Build the problem from its on-disk form and run one solver on it.
pub fn run_instance(
    file: &InstanceFile,
    method: Method,
    settings: &RunSettings,
) -> Result<RunResult, HarnessError> {
    let problem = file.to_problem()?;
    let config = settings.to_config(method);
    solve(&problem, &config).map_err(HarnessError::from)
}

fn csv_number(value: f64) -> String {
    format!("{value}")
}

fn csv_optional(value: Option<f64>) -> String {
    value.map(csv_number).unwrap_or_default()
}

fn csv_escape(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

pub fn trace_to_csv(trace: &SolverTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for rec in trace.records() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            rec.iteration,
            rec.lmo_calls,
            csv_number(rec.elapsed_seconds),
            csv_number(rec.f_value),
            csv_optional(rec.f_mu_value),
            csv_optional(rec.dual_bound),
        );
    }
    out
}

pub fn write_trace_csv(path: &Path, trace: &SolverTrace) -> Result<(), HarnessError> {
    fs::write(path, trace_to_csv(trace)).map_err(|e| {
        HarnessError::solver(format!("cannot write trace {}: {e}", path.display()))
    })
}

pub fn trace_file_name(instance: &str, method: Method) -> String {
    format!("{instance}_{}.csv", method.name())
}

/// Run every cell, writing one trace CSV per successful cell plus a single
/// `summary.csv`. Cells run in parallel; rows keep the scheduling order.
/// Failures are recorded in the summary instead of aborting the sweep.
pub fn run_bench(
    cells: Vec<BenchCell>,
    settings: &RunSettings,
    out_dir: &Path,
) -> Result<Vec<CellOutcome>, HarnessError> {
    fs::create_dir_all(out_dir).map_err(|e| {
        HarnessError::usage(format!("cannot create output directory {}: {e}", out_dir.display()))
    })?;

    let outcomes: Vec<CellOutcome> = cells
        .into_par_iter()
        .map(|cell| {
            let trace_file = trace_file_name(&cell.name, cell.method);
            let result = run_instance(&cell.file, cell.method, settings).and_then(|run| {
                write_trace_csv(&out_dir.join(&trace_file), &run.trace)?;
                Ok(run)
            });
            CellOutcome { name: cell.name, method: cell.method, trace_file, result }
        })
        .collect();

    write_summary_csv(&out_dir.join(SUMMARY_FILE), &outcomes)?;
    Ok(outcomes)
}

pub fn summary_to_csv(outcomes: &[CellOutcome]) -> String {
    let mut out = String::new();
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for cell in outcomes {
        match &cell.result {
            Ok(run) => {
                let elapsed =
                    run.trace.last().map(|rec| rec.elapsed_seconds).unwrap_or(0.0);
                let _ = writeln!(
                    out,
                    "{},{},ok,{},{},{},{},{},{},{},",
                    csv_escape(&cell.name),
                    cell.method.name(),
                    run.termination.name(),
                    csv_number(run.f_best),
                    csv_optional(run.dual_bound),
                    run.iterations,
                    run.lmo_calls,
                    csv_number(elapsed),
                    csv_escape(&cell.trace_file),
                );
            }
            Err(err) => {
                let _ = writeln!(
                    out,
                    "{},{},error,,,,,,,{}",
                    csv_escape(&cell.name),
                    cell.method.name(),
                    csv_escape(&err.to_string()),
                );
            }
        }
    }
    out
}

pub fn write_summary_csv(path: &Path, outcomes: &[CellOutcome]) -> Result<(), HarnessError> {
    fs::write(path, summary_to_csv(outcomes)).map_err(|e| {
        HarnessError::solver(format!("cannot write summary {}: {e}", path.display()))
    })
}

/// The exit classification for a finished benchmark: instance problems win
/// over solver problems, success only when every cell succeeded.
pub fn worst_error_kind(outcomes: &[CellOutcome]) -> Option<ErrorKind> {
    let mut worst: Option<ErrorKind> = None;
    for cell in outcomes {
        if let Err(err) = &cell.result {
            match err.kind {
                ErrorKind::Usage | ErrorKind::Instance => return Some(ErrorKind::Instance),
                ErrorKind::Solver => worst = Some(ErrorKind::Solver),
            }
        }
    }
    worst
}

/// Default output location for a solve trace when the caller gave none.
pub fn default_trace_path(instance_path: &Path, method: Method) -> PathBuf {
    let stem = instance_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string());
    instance_path.with_file_name(trace_file_name(&sanitize_name(&stem), method))
}

/// File-name-safe instance label: alphanumerics kept, everything else mapped
/// to '-'.
pub fn sanitize_name(raw: &str) -> String {
    let mut out: String = raw
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '-' })
        .collect();
    if out.is_empty() {
        out.push_str("instance");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{real_vec, GraphData, Kind, Real, UncertaintyData};
    use robustfw_core::trace::TraceRecord;

    fn tiny_instance() -> InstanceFile {
        InstanceFile {
            version: 1,
            kind: Kind::Mst,
            name: Some("tri".to_string()),
            graph: Some(GraphData {
                num_vertices: 3,
                edges: vec![[0, 1], [0, 2], [1, 2]],
            }),
            vertices: None,
            uncertainty: UncertaintyData::Budgeted {
                c_lower: real_vec(&[1.0, 2.0, 3.0]),
                d: real_vec(&[2.0, 1.0, 1.0]),
                gamma: Real(1.5),
            },
            constants: None,
            seed: None,
        }
    }

    #[test]
    fn trace_csv_has_the_agreed_header_and_blank_optionals() {
        let mut trace = SolverTrace::new();
        trace.push(TraceRecord {
            iteration: 1,
            f_value: 2.5,
            f_mu_value: None,
            dual_bound: Some(1.25),
            lmo_calls: 3,
            elapsed_seconds: 0.0,
        });
        let text = trace_to_csv(&trace);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), TRACE_HEADER);
        assert_eq!(lines.next().unwrap(), "1,3,0,2.5,,1.25");
        assert!(lines.next().is_none());
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn bench_writes_traces_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let cells = vec![
            BenchCell { name: "tri".into(), file: tiny_instance(), method: Method::Fw },
            BenchCell { name: "tri".into(), file: tiny_instance(), method: Method::ConsGen },
        ];
        let settings = RunSettings { epsilon: 0.2, ..RunSettings::default() };
        let outcomes = run_bench(cells, &settings, dir.path()).unwrap();
        assert_eq!(outcomes.len(), 2);
        assert!(worst_error_kind(&outcomes).is_none());
        assert!(dir.path().join("tri_fw.csv").is_file());
        assert!(dir.path().join("tri_consgen.csv").is_file());
        let summary = fs::read_to_string(dir.path().join(SUMMARY_FILE)).unwrap();
        let mut lines = summary.lines();
        assert_eq!(lines.next().unwrap(), SUMMARY_HEADER);
        assert_eq!(lines.clone().count(), 2);
        assert!(lines.all(|l| l.contains(",ok,")));
    }

    #[test]
    fn failed_cells_land_in_the_summary_without_aborting() {
        let dir = tempfile::tempdir().unwrap();
        let mut broken = tiny_instance();
        broken.graph = None;
        let cells = vec![
            BenchCell { name: "bad".into(), file: broken, method: Method::Fw },
            BenchCell { name: "tri".into(), file: tiny_instance(), method: Method::Fw },
        ];
        let outcomes = run_bench(cells, &RunSettings::default(), dir.path()).unwrap();
        assert_eq!(worst_error_kind(&outcomes), Some(ErrorKind::Instance));
        let summary = fs::read_to_string(dir.path().join(SUMMARY_FILE)).unwrap();
        let lines: Vec<&str> = summary.lines().collect();
        assert!(lines[1].starts_with("bad,fw,error,"));
        assert!(lines[2].starts_with("tri,fw,ok,"));
        assert!(!dir.path().join("bad_fw.csv").exists());
    }

    #[test]
    fn names_are_made_file_safe() {
        assert_eq!(sanitize_name("a b/c"), "a-b-c");
        assert_eq!(sanitize_name("k4_g1p5"), "k4_g1p5");
        assert_eq!(sanitize_name(""), "instance");
    }
}
