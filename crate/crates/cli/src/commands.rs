//! Command execution: fan-out of checks and report emission.

use std::fmt::Write as _;

use diracwb_core::relations::SamplingOptions;
use diracwb_core::{CheckReport, Verdict};
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, CATALOG};
use crate::error::UsageError;
use crate::model::{DefinitionFile, Invocation};

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub sampling: SamplingOptions,
    pub pretty: bool,
    pub timing: bool,
}

/// Text for standard output plus the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

#[derive(Serialize)]
struct Line<'a> {
    invocation: String,
    #[serde(flatten)]
    report: &'a CheckReport,
}

/// Runs the invocations concurrently; reports come back in input order.
pub fn run_checks(file: &DefinitionFile, invocations: &[Invocation], opts: &RunOptions) -> Vec<CheckReport> {
    invocations
        .par_iter()
        .map(|inv| catalog::run(file, inv, &opts.sampling, opts.timing))
        .collect()
}

/// Exit code 1 when any verdict is FAIL.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    i32::from(reports.iter().any(|r| r.verdict == Verdict::Fail))
}

pub fn json_lines(invocations: &[Invocation], reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for (inv, report) in invocations.iter().zip(reports) {
        let line = Line {
            invocation: inv.to_string(),
            report,
        };
        out.push_str(&serde_json::to_string(&line).expect("reports serialize"));
        out.push('\n');
    }
    out
}

pub fn summary_table(invocations: &[Invocation], reports: &[CheckReport]) -> String {
    let labels: Vec<String> = invocations.iter().map(Invocation::to_string).collect();
    let width = labels.iter().map(String::len).max().unwrap_or(0).max(10);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  {:<8} regime", "check", "verdict");
    for (label, r) in labels.iter().zip(reports) {
        let regime = serde_json::to_value(r.regime).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let _ = write!(out, "{label:<width$}  {:<8} {regime}", r.verdict.to_string());
        if let Some(t) = r.timing_ms {
            let _ = write!(out, "  {t:.1} ms");
        }
        out.push('\n');
        for w in &r.witnesses {
            let _ = writeln!(out, "    witness: {w}");
        }
        for w in &r.warnings {
            let _ = writeln!(out, "    warning: {w}");
        }
    }
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    let _ = writeln!(
        out,
        "{} checks: {} pass, {} fail, {} vacuous",
        reports.len(),
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::Vacuous)
    );
    out
}

/// Runs `invocations` and formats the result.
pub fn execute(file: &DefinitionFile, invocations: &[Invocation], opts: &RunOptions) -> Outcome {
    let reports = run_checks(file, invocations, opts);
    let stdout = if opts.pretty {
        summary_table(invocations, &reports)
    } else {
        json_lines(invocations, &reports)
    };
    Outcome {
        stdout,
        code: exit_code(&reports),
    }
}

/// Every `check` line of the file.
pub fn run_file(file: &DefinitionFile, opts: &RunOptions) -> Outcome {
    execute(file, &file.checks, opts)
}

/// A single invocation assembled from command-line flags.
pub fn run_one(file: &DefinitionFile, inv: Invocation, opts: &RunOptions) -> Result<Outcome, UsageError> {
    catalog::validate(file, &inv).map_err(|e| UsageError::Invalid(format!("{inv}: {e}")))?;
    Ok(execute(file, std::slice::from_ref(&inv), opts))
}

/// The catalog as a table of names, parameters and summaries.
pub fn list_checks() -> String {
    let mut out = String::new();
    for spec in CATALOG {
        let params: Vec<String> = spec
            .params
            .iter()
            .map(|(k, p, required)| {
                if *required {
                    format!("{k}=<{}>", p.describe())
                } else {
                    format!("[{k}=<{}>]", p.describe())
                }
            })
            .collect();
        let head = if params.is_empty() { spec.name.to_string() } else { format!("{}  {}", spec.name, params.join(" ")) };
        let _ = writeln!(out, "{head}\n    {}", spec.summary);
    }
    out
}
