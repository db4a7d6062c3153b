use std::collections::BTreeMap;

use anyhow::Result;
use serde_json::{json, Value};

use crate::encode::flat;

/// One verified fact. `key` orders the report and must be unique per suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: String,
    pub key: String,
    pub pass: bool,
    pub data: Value,
    pub witness: Option<Value>,
}

impl Check {
    pub fn new(suite: &str, key: impl Into<String>, pass: bool, data: Value) -> Check {
        Check { suite: suite.into(), key: key.into(), pass, data, witness: None }
    }

    pub fn with_witness(mut self, w: Value) -> Check {
        self.witness = Some(w);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    /// Free-form records that are not pass/fail checks (skips, exhaustion bounds).
    pub notes: Vec<Value>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Report {
        Report { command: command.into(), config, checks: Vec::new(), notes: Vec::new() }
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn counts(&self) -> BTreeMap<String, Counts> {
        let mut out: BTreeMap<String, Counts> = BTreeMap::new();
        for c in &self.checks {
            let e = out.entry(c.suite.clone()).or_default();
            e.total += 1;
            if c.pass {
                e.passed += 1;
            } else {
                e.failed += 1;
            }
        }
        out
    }

    fn sorted(&self) -> Vec<&Check> {
        let mut v: Vec<&Check> = self.checks.iter().collect();
        v.sort_by(|a, b| (&a.suite, &a.key).cmp(&(&b.suite, &b.key)));
        v
    }

    pub fn to_json(&self) -> Value {
        let summary: serde_json::Map<String, Value> = self
            .counts()
            .into_iter()
            .map(|(k, c)| (k, json!({"total": c.total, "passed": c.passed, "failed": c.failed})))
            .collect();
        json!({
            "tool": "oklab",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "summary": summary,
            "all_pass": self.all_pass(),
            "checks": self.sorted().into_iter().map(|c| json!({
                "suite": c.suite,
                "key": c.key,
                "pass": c.pass,
                "data": c.data,
                "witness": c.witness,
            })).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report is valid JSON");
        s.push('\n');
        s
    }

    /// One row per check, rationals as `n/d`.
    pub fn render_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "key", "pass", "data", "witness"])?;
        for c in self.sorted() {
            let witness = c.witness.as_ref().map(flat).unwrap_or_default();
            w.write_record([c.suite.as_str(), c.key.as_str(), if c.pass { "true" } else { "false" }, &flat(&c.data), &witness])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("verify", json!({"seed": 7}));
        r.extend([
            Check::new("b", "2", true, json!({"x": [1, 2]})),
            Check::new("a", "1", false, json!({"x": [3, 1]})).with_witness(json!([[1, 3]])),
        ]);
        r
    }

    #[test]
    fn output_is_sorted_and_stable() {
        let r = sample();
        let j = r.to_json();
        assert_eq!(j["checks"][0]["suite"], "a");
        assert_eq!(j["summary"]["a"]["failed"], 1);
        assert_eq!(r.render_json(), sample().render_json());
        let csv = r.render_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "a,1,false,x=3,(1/3)");
        assert_eq!(lines[2], "b,2,true,x=1/2,");
        assert!(!r.all_pass());
    }
}
