//! The JSON report document.

use super::registry::Planned;
use super::scenario::{Expect, Scenario, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::poisson::Backend;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Error,
    ExpectedFail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
            Status::ExpectedFail => "expected-fail",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub check: String,
    pub status: Status,
    pub expected: Expect,
    /// Whether the outcome matches `expected`.
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub elapsed_ms: u64,
}

impl CheckRecord {
    /// Classify an outcome. An expected failure keeps its witness in `detail`.
    pub fn new(p: &Planned, outcome: Result<crate::poisson::Report>, elapsed_ms: u64) -> Self {
        let (status, witness, detail) = match outcome {
            Ok(r) if r.pass => (Status::Pass, None, r.detail),
            Ok(r) if p.expect == Expect::Fail => {
                let d = match (r.witness, r.detail) {
                    (Some(w), Some(d)) => Some(format!("{w}; {d}")),
                    (w, d) => w.or(d),
                };
                (Status::ExpectedFail, None, d)
            }
            Ok(r) => (Status::Fail, Some(r.witness.unwrap_or_else(|| "check failed".into())), r.detail),
            Err(e) => (Status::Error, Some(e.to_string()), None),
        };
        let matched = matches!(
            (status, p.expect),
            (Status::Pass, Expect::Pass) | (Status::ExpectedFail, Expect::Fail) | (Status::Error, Expect::Error)
        );
        CheckRecord {
            id: p.label.clone(),
            check: p.kind.to_string(),
            status,
            expected: p.expect,
            matched,
            witness,
            detail,
            elapsed_ms,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub backend: Backend,
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    pub expected_fail: usize,
    pub mismatched: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: i64,
    pub tool: String,
    pub version: String,
    pub scenario: ScenarioEcho,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(scn: &Scenario, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let mut s = Summary { total: checks.len(), ..Default::default() };
        for c in &checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Error => s.error += 1,
                Status::ExpectedFail => s.expected_fail += 1,
            }
            if !c.matched {
                s.mismatched += 1;
            }
        }
        RunReport {
            schema: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: ScenarioEcho {
                name: scn.name.clone(),
                backend: scn.backend,
                prime: scn.prime,
                seed: scn.seed,
                trials: scn.trials,
            },
            checks,
            summary: s,
        }
    }

    pub fn all_matched(&self) -> bool {
        self.summary.mismatched == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The document with every `elapsed_ms` set to zero.
    pub fn to_json_untimed(&self) -> String {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.elapsed_ms = 0;
        }
        r.to_json()
    }

    /// Write through a temporary file in the same directory, then rename.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => std::path::PathBuf::from("."),
        };
        std::fs::create_dir_all(&dir).map_err(io)?;
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
        let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
        let mut f = std::fs::File::create(&tmp).map_err(io)?;
        f.write_all(self.to_json().as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        drop(f);
        std::fs::rename(&tmp, path).map_err(io)
    }
}

/// Zero every `"elapsed_ms"` value in a report document.
pub fn strip_timing(json: &str) -> String {
    let mut v: serde_json::Value = match serde_json::from_str(json) {
        Ok(v) => v,
        Err(_) => return json.to_string(),
    };
    if let Some(cs) = v.get_mut("checks").and_then(|c| c.as_array_mut()) {
        for c in cs {
            if let Some(t) = c.get_mut("elapsed_ms") {
                *t = serde_json::Value::from(0);
            }
        }
    }
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}
