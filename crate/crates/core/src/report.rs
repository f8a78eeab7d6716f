//! Machine-readable check reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Outcome of one named property, aggregated over its instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
    /// Description of the first failing instance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), instances: 0, failures: 0, witness: None }
    }

    /// Record one instance; `witness` is only evaluated on the first failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    /// Record an instance whose evaluation may itself have failed.
    pub fn record_result(&mut self, outcome: crate::Result<bool>, witness: impl FnOnce() -> String) {
        match outcome {
            Ok(ok) => self.record(ok, witness),
            Err(e) => self.record(false, || format!("{}: error {e}", witness())),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn absorb(&mut self, other: Check) {
        self.instances += other.instances;
        self.failures += other.failures;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), checks: vec![] }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Add a check, prefixing its name.
    pub fn push_prefixed(&mut self, prefix: &str, mut check: Check) {
        check.name = format!("{prefix}/{}", check.name);
        self.checks.push(check);
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.push_prefixed(prefix, c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Sort checks by name so that output is independent of evaluation order.
    pub fn sorted(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status} {} ({} instances, {} failures)", c.name, c.instances, c.failures);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "    witness: {w}");
            }
        }
        let _ = writeln!(out, "{}: {}", self.suite, if self.passed() { "all checks passed" } else { "FAILED" });
        out
    }
}
