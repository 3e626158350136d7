//! Reports: a canonical JSON document and a human-readable rendering.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub const TOOL: &str = "courant";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, witness: None }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { name: name.into(), passed: false, witness: Some(witness.into()) }
    }

    pub fn from_result(name: impl Into<String>, r: Result<(), String>) -> Self {
        match r {
            Ok(()) => Check::pass(name),
            Err(w) => Check::fail(name, w),
        }
    }
}

/// Payload sections map keys (chart or simplex names) to literals.
pub type Payload = BTreeMap<String, BTreeMap<String, String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskReport {
    pub name: String,
    pub kind: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub payload: Payload,
}

impl TaskReport {
    pub fn new(name: String, kind: &str, checks: Vec<Check>, payload: Payload) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        TaskReport { name, kind: kind.to_string(), passed, checks, payload }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub manifest_sha256: String,
    pub seed: u64,
    pub samples: usize,
    pub degree_bound: usize,
    pub passed: bool,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn failures(&self) -> impl Iterator<Item = (&TaskReport, &Check)> {
        self.tasks.iter().flat_map(|t| t.checks.iter().filter(|c| !c.passed).map(move |c| (t, c)))
    }

    pub fn to_text(&self, timings: &[Duration], cached: &[bool]) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{TOOL} {}  manifest {}", self.version, self.manifest_sha256);
        let _ = writeln!(out, "seed {}  samples {}  degree-bound {}", self.seed, self.samples, self.degree_bound);
        for (k, t) in self.tasks.iter().enumerate() {
            let status = if t.passed { "PASS" } else { "FAIL" };
            let ms = timings.get(k).map_or(0, |d| d.as_millis());
            let cache = if cached.get(k).copied().unwrap_or(false) { "  (cached)" } else { "" };
            let _ = writeln!(out, "[{status}] {} ({})  {ms} ms{cache}", t.name, t.kind);
            for c in &t.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                match &c.witness {
                    Some(w) => {
                        let _ = writeln!(out, "    {mark} {}: {w}", c.name);
                    }
                    None => {
                        let _ = writeln!(out, "    {mark} {}", c.name);
                    }
                }
            }
            for (section, entries) in &t.payload {
                for (key, lit) in entries {
                    let _ = writeln!(out, "    {section}[{key}] = {lit}");
                }
            }
        }
        let passed = self.tasks.iter().filter(|t| t.passed).count();
        let _ = writeln!(out, "{passed}/{} tasks passed", self.tasks.len());
        out
    }
}
