//! Machine-readable suite reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::exactgeom::{qstr, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Warn,
    /// A documented counterexample was reproduced.
    ExpectedFailure,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub name: String,
    pub status: Status,
    pub checked: u64,
    pub violations: u64,
    pub details: Value,
}

/// Run options shared by all suites. `None` means the suite default.
#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub kind: Option<String>,
    pub radius: Option<Q>,
    pub q: Option<u32>,
    pub dim: Option<usize>,
    pub seed: u64,
    pub trials: Option<usize>,
    pub strict_window: bool,
}

impl SuiteConfig {
    pub fn to_json(&self) -> Value {
        json!({
            "type": self.kind,
            "radius": self.radius.as_ref().map(qstr),
            "q": self.q,
            "dim": self.dim,
            "seed": self.seed.to_string(),
            "trials": self.trials,
            "strict_window": self.strict_window,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub config: Value,
    pub cases: Vec<CaseRecord>,
    pub summary: Value,
    pub elapsed_ms: Option<u128>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn case(&self, name: &str) -> Option<&CaseRecord> {
        self.cases.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        let count = |s: Status| self.cases.iter().filter(|c| c.status == s).count();
        let mut v = json!({
            "suite": self.suite,
            "config": self.config,
            "cases": self.cases,
            "summary": self.summary,
            "totals": {
                "cases": self.cases.len(),
                "pass": count(Status::Pass),
                "fail": count(Status::Fail),
                "warn": count(Status::Warn),
                "expected_failure": count(Status::ExpectedFailure),
            },
        });
        if let Some(ms) = self.elapsed_ms {
            v["elapsed_ms"] = json!(ms.to_string());
        }
        canonical(v)
    }

    /// Pretty JSON with sorted keys. Identical runs give identical bytes.
    pub fn to_json_string(&self) -> String {
        let v = self.to_json();
        debug_assert!(!has_float(&v));
        serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
    }
}

/// Sorts object keys recursively, whatever map type serde_json was built with.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let sorted: BTreeMap<String, Value> = m.into_iter().map(|(k, v)| (k, canonical(v))).collect();
            let mut out = Map::new();
            for (k, v) in sorted {
                out.insert(k, v);
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        other => other,
    }
}

pub fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_f64(),
        Value::Array(a) => a.iter().any(has_float),
        Value::Object(m) => m.values().any(has_float),
        _ => false,
    }
}

/// Accumulates checks for one case.
pub struct Case {
    name: String,
    checked: u64,
    violations: u64,
    examples: Vec<String>,
    details: Map<String, Value>,
    warnings: Vec<String>,
}

const MAX_EXAMPLES: usize = 5;

impl Case {
    pub fn new(name: &str) -> Self {
        Case { name: name.to_string(), checked: 0, violations: 0, examples: vec![], details: Map::new(), warnings: vec![] }
    }

    /// Records one check; `what` is only built on failure.
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(what());
            }
        }
        ok
    }

    pub fn detail(&mut self, key: &str, v: impl Serialize) {
        self.details.insert(key.to_string(), serde_json::to_value(v).expect("detail serializes"));
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn violations(&self) -> u64 {
        self.violations
    }

    fn into_record(mut self, status: Status) -> CaseRecord {
        if !self.examples.is_empty() {
            self.details.insert("examples".into(), json!(self.examples));
        }
        if !self.warnings.is_empty() {
            self.details.insert("warnings".into(), json!(self.warnings));
        }
        CaseRecord { name: self.name, status, checked: self.checked, violations: self.violations, details: Value::Object(self.details) }
    }

    /// Pass, or Warn if warnings were raised or nothing was checked, or Fail on any violation.
    pub fn finish(mut self) -> CaseRecord {
        if self.checked == 0 && self.warnings.is_empty() {
            self.warn("no instances arose, the check is vacuous");
        }
        let s = if self.violations > 0 {
            Status::Fail
        } else if !self.warnings.is_empty() {
            Status::Warn
        } else {
            Status::Pass
        };
        self.into_record(s)
    }

    /// For reproductions of known counterexamples: every check here confirms the failure.
    pub fn finish_expected_failure(self) -> CaseRecord {
        let s = if self.violations > 0 || self.checked == 0 { Status::Fail } else { Status::ExpectedFailure };
        self.into_record(s)
    }
}
