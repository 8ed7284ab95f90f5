//! Randomized checks of classical module inequalities.
//!
//! Each suite draws seeded random configurations, computes both sides of an
//! inequality (grid solver or closed form, each with an error estimate) and
//! records the margin `rhs − lhs`. A trial is a violation only when the margin
//! is more negative than the summed error estimates plus the tolerance.

pub mod generators;
mod suites;

use serde::Serialize;

use crate::modsolver::ModulusResult;
use crate::report::{Report, Value};

pub use suites::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    /// Finest grid resolution of each solve.
    pub resolution: usize,
    pub tolerance: f64,
    pub jobs: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { resolution: 64, tolerance: 1e-6, jobs: 1 }
    }
}

/// A computed quantity with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Estimate {
        Estimate { value, error: 0.0 }
    }

    pub fn new(value: f64, error: f64) -> Estimate {
        Estimate { value, error }
    }

    pub fn scale(self, c: f64) -> Estimate {
        Estimate { value: c * self.value, error: c.abs() * self.error }
    }
}

impl From<&ModulusResult> for Estimate {
    fn from(m: &ModulusResult) -> Estimate {
        Estimate { value: m.value, error: m.error_estimate }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate { value: self.value + o.value, error: self.error + o.error }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Violation,
    Skipped(String),
}

/// One inequality `lhs ≤ rhs` evaluated in one trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub check: String,
    pub inputs: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub slack: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifierReport {
    pub suite: String,
    pub trials: usize,
    pub violations: usize,
    pub skipped: usize,
    pub worst_margin: Option<f64>,
    pub tolerance: f64,
    pub records: Vec<TrialRecord>,
}

impl VerifierReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new(
            format!("verify {}", self.suite),
            &["trial", "check", "inputs", "lhs", "rhs", "margin", "slack", "status"],
        );
        for t in &self.records {
            let status = match &t.status {
                Status::Pass => "pass".to_string(),
                Status::Violation => "violation".to_string(),
                Status::Skipped(why) => format!("skipped: {why}"),
            };
            r.push_row(vec![
                Value::from(t.trial),
                Value::from(t.check.as_str()),
                Value::from(t.inputs.as_str()),
                t.lhs.into(),
                t.rhs.into(),
                t.margin.into(),
                t.slack.into(),
                status.into(),
            ]);
        }
        r.set("suite", self.suite.as_str());
        r.set("trials", self.trials);
        r.set("skipped", self.skipped);
        r.set("tolerance", self.tolerance);
        r.violations = self.violations;
        r.worst_margin = self.worst_margin;
        r
    }
}

/// A named inequality `lhs ≤ rhs` produced by a trial.
pub(crate) struct Check {
    pub name: &'static str,
    pub lhs: Estimate,
    pub rhs: Estimate,
}

pub(crate) fn check(name: &'static str, lhs: Estimate, rhs: Estimate) -> Check {
    Check { name, lhs, rhs }
}

pub(crate) type TrialOutput = crate::Result<(String, Vec<Check>)>;

/// Runs `trials` independent trials, fanned out over `opts.jobs` threads and
/// merged by trial index.
pub(crate) fn run_suite<F>(suite: &str, trials: usize, seed: u64, opts: &SuiteOptions, f: F) -> VerifierReport
where
    F: Fn(usize, &mut rand_chacha::ChaCha8Rng, &SuiteOptions) -> TrialOutput + Sync,
{
    let per_trial = crate::parallel::par_map(trials, opts.jobs, |i| {
        let mut rng = generators::trial_rng(seed, i);
        records_for(i, f(i, &mut rng, opts), opts.tolerance)
    });
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    let violations = records.iter().filter(|r| r.status == Status::Violation).count();
    let skipped = records.iter().filter(|r| matches!(r.status, Status::Skipped(_))).count();
    let worst_margin = records
        .iter()
        .filter(|r| !matches!(r.status, Status::Skipped(_)))
        .map(|r| r.margin)
        .fold(None, |w: Option<f64>, m| Some(w.map_or(m, |w| w.min(m))));
    VerifierReport { suite: suite.to_string(), trials, violations, skipped, worst_margin, tolerance: opts.tolerance, records }
}

fn records_for(trial: usize, out: TrialOutput, tol: f64) -> Vec<TrialRecord> {
    match out {
        Err(e) => vec![TrialRecord {
            trial,
            check: String::new(),
            inputs: String::new(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            slack: f64::NAN,
            status: Status::Skipped(e.to_string()),
        }],
        Ok((inputs, checks)) => checks
            .into_iter()
            .map(|c| {
                let margin = c.rhs.value - c.lhs.value;
                let slack = c.lhs.error + c.rhs.error + tol;
                let status = if margin < -slack { Status::Violation } else { Status::Pass };
                TrialRecord { trial, check: c.name.to_string(), inputs: inputs.clone(), lhs: c.lhs.value, rhs: c.rhs.value, margin, slack, status }
            })
            .collect(),
    }
}
