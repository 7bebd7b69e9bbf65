//! Numeric verification of identities and whole-corpus runs.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{sample_bindings, CorpusEntry, EntryStatus, VerifyMode};
use crate::core_types::{Bindings, Identity};
use crate::error::{Error, Result};
use crate::numerics::{combined_rigor, eval_expression, ComplexApprox, Precision, Rigor};

/// Outcome of checking one concrete identity.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub name: String,
    /// The sampled binding, for parametric entries.
    pub binding: Option<BTreeMap<String, String>>,
    pub lhs_value: Option<ComplexApprox>,
    pub rhs_value: Option<ComplexApprox>,
    /// `NaN` when a side failed to evaluate.
    pub abs_diff: f64,
    pub tolerance: i32,
    pub passed: bool,
    pub rigor: Rigor,
    pub error: Option<String>,
    pub elapsed: Duration,
}

impl VerificationReport {
    /// Sum of the two sides' error radii.
    pub fn err_bound(&self) -> f64 {
        match (&self.lhs_value, &self.rhs_value) {
            (Some(l), Some(r)) => l.err() + r.err(),
            _ => f64::NAN,
        }
    }

    /// True when the reported error radii account for the observed difference.
    pub fn err_covers_diff(&self) -> bool {
        self.abs_diff <= self.err_bound()
    }

    fn to_json(&self, digits: usize, timing: bool) -> Value {
        let approx = |v: &Option<ComplexApprox>| match v {
            Some(v) => json!({"value": v.to_decimal(digits), "err": format!("{:.3e}", v.err()), "rigor": v.rigor()}),
            None => Value::Null,
        };
        let mut v = json!({
            "binding": self.binding,
            "lhs": approx(&self.lhs_value),
            "rhs": approx(&self.rhs_value),
            "abs_diff": if self.abs_diff.is_nan() { Value::Null } else { json!(format!("{:.3e}", self.abs_diff)) },
            "passed": self.passed,
            "rigor": self.rigor,
            "error": self.error,
        });
        if timing {
            v["elapsed_ms"] = json!(self.elapsed.as_secs_f64() * 1e3);
        }
        v
    }
}

/// Evaluates both sides of a concrete identity and compares them against
/// `10^tol_exp`.
pub fn verify(id: &Identity, prec: &Precision, tol_exp: i32) -> Result<VerificationReport> {
    let start = Instant::now();
    let none = Bindings::new();
    let side = |side: &'static str, e| {
        eval_expression(e, &none, prec).map_err(|source| Error::Evaluation { side, source: Box::new(source) })
    };
    let l = side("lhs", &id.lhs)?;
    let r = side("rhs", &id.rhs)?;
    let abs_diff = l.abs_diff(&r);
    Ok(VerificationReport {
        name: id.name.clone(),
        binding: None,
        passed: abs_diff <= 10f64.powi(tol_exp),
        rigor: combined_rigor(&l, &r),
        lhs_value: Some(l),
        rhs_value: Some(r),
        abs_diff,
        tolerance: tol_exp,
        error: None,
        elapsed: start.elapsed(),
    })
}

/// As [`verify`], folding errors into a failed report.
fn check(id: Result<Identity>, name: &str, prec: &Precision, tol: i32, binding: Option<&Bindings>) -> VerificationReport {
    let start = Instant::now();
    let mut report = match id.and_then(|id| verify(&id, prec, tol)) {
        Ok(r) => r,
        Err(e) => VerificationReport {
            name: name.to_string(),
            binding: None,
            lhs_value: None,
            rhs_value: None,
            abs_diff: f64::NAN,
            tolerance: tol,
            passed: false,
            rigor: Rigor::Heuristic,
            error: Some(e.to_string()),
            elapsed: start.elapsed(),
        },
    };
    report.binding = binding.map(|b| b.iter().map(|(k, v)| (k.clone(), v.to_string())).collect());
    report
}

/// Per-entry results of a corpus run.
#[derive(Clone, Debug)]
pub struct EntryReport {
    pub name: String,
    pub tags: Vec<String>,
    pub mode: VerifyMode,
    pub status: EntryStatus,
    pub reports: Vec<VerificationReport>,
    /// Set when parametric sampling could not produce enough bindings.
    pub sampling_error: Option<String>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.sampling_error.is_none() && !self.reports.is_empty() && self.reports.iter().all(|r| r.passed)
    }

    pub fn is_disputed(&self) -> bool {
        matches!(self.status, EntryStatus::Disputed { .. })
    }

    /// Largest difference over all samples.
    pub fn worst_diff(&self) -> f64 {
        self.reports.iter().map(|r| r.abs_diff).fold(0.0, |a, d| if d.is_nan() || a.is_nan() { f64::NAN } else { a.max(d) })
    }

    pub fn elapsed(&self) -> Duration {
        self.reports.iter().map(|r| r.elapsed).sum()
    }

    fn to_json(&self, digits: usize, timing: bool) -> Value {
        let (mode, samples) = match self.mode {
            VerifyMode::Fixed => ("fixed", None),
            VerifyMode::Parametric { samples } => ("parametric", Some(samples)),
        };
        let status = match &self.status {
            EntryStatus::Active => json!("active"),
            EntryStatus::Disputed { .. } => json!("disputed"),
        };
        json!({
            "name": self.name,
            "tags": self.tags,
            "mode": mode,
            "samples": samples,
            "status": status,
            "passed": self.passed(),
            "sampling_error": self.sampling_error,
            "reports": self.reports.iter().map(|r| r.to_json(digits, timing)).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub digits: u32,
    pub seed: u64,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    /// Replaces every entry's own tolerance.
    pub tol_override: Option<i32>,
    /// Keep only entries carrying this tag.
    pub tag: Option<String>,
    /// Keep only entries with these names.
    pub names: Vec<String>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { digits: 40, seed: 0, threads: None, tol_override: None, tag: None, names: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusSummary {
    pub digits: u32,
    pub seed: u64,
    pub entries: Vec<EntryReport>,
}

impl CorpusSummary {
    pub fn passed(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_disputed() && e.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_disputed() && !e.passed()).count()
    }

    pub fn disputed(&self) -> usize {
        self.entries.iter().filter(|e| e.is_disputed()).count()
    }

    /// True when every entry outside quarantine passed.
    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    /// The machine-readable report. Timings are left out unless asked for,
    /// so that equal seeds give byte-identical reports.
    pub fn to_json(&self, timing: bool) -> Value {
        let digits = self.digits.saturating_sub(5).max(10) as usize;
        json!({
            "schema": 1,
            "digits": self.digits,
            "seed": self.seed,
            "totals": {
                "entries": self.entries.len(),
                "passed": self.passed(),
                "failed": self.failed(),
                "disputed": self.disputed(),
            },
            "entries": self.entries.iter().map(|e| e.to_json(digits, timing)).collect::<Vec<_>>(),
        })
    }
}

/// Verifies every selected entry. Entries and samples run concurrently;
/// results come back in corpus order.
pub fn run_all(corpus: &[CorpusEntry], opts: &RunOptions) -> CorpusSummary {
    let selected: Vec<&CorpusEntry> = corpus
        .iter()
        .filter(|e| opts.tag.as_ref().is_none_or(|t| e.class_tags.contains(t)))
        .filter(|e| opts.names.is_empty() || opts.names.iter().any(|n| n == e.name()))
        .collect();
    let mut entries: Vec<EntryReport> = Vec::with_capacity(selected.len());
    let mut tasks: Vec<(usize, Option<Bindings>)> = Vec::new();
    for (i, e) in selected.iter().enumerate() {
        let mut sampling_error = None;
        match e.verify_mode {
            VerifyMode::Fixed => tasks.push((i, None)),
            VerifyMode::Parametric { samples } => match sample_bindings(e, samples, opts.seed) {
                Ok(bs) => tasks.extend(bs.into_iter().map(|b| (i, Some(b)))),
                Err(err) => sampling_error = Some(err.to_string()),
            },
        }
        entries.push(EntryReport {
            name: e.name().to_string(),
            tags: e.class_tags.clone(),
            mode: e.verify_mode,
            status: e.status.clone(),
            reports: Vec::new(),
            sampling_error,
        });
    }
    let prec = Precision::new(opts.digits);
    let work = || -> Vec<(usize, VerificationReport)> {
        tasks
            .par_iter()
            .map(|(i, b)| {
                let e = selected[*i];
                let tol = opts.tol_override.unwrap_or(e.expected_tolerance);
                let id = match b {
                    Some(b) => e.instantiate(b),
                    None => Ok(e.identity.clone()),
                };
                (*i, check(id, e.name(), &prec, tol, b.as_ref()))
            })
            .collect()
    };
    let results = match opts.threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(work),
        None => work(),
    };
    for (i, r) in results {
        entries[i].reports.push(r);
    }
    CorpusSummary { digits: opts.digits, seed: opts.seed, entries }
}
