//! Machine-readable pass/fail reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub check_id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    pub counts: BTreeMap<String, u64>,
}

impl Check {
    pub fn new(check_id: impl Into<String>) -> Self {
        Check {
            check_id: check_id.into(),
            status: Status::Pass,
            counterexample: None,
            counts: BTreeMap::new(),
        }
    }

    pub fn count(mut self, key: &str, value: usize) -> Self {
        self.counts.insert(key.to_string(), value as u64);
        self
    }

    /// Marks the check failed. Only the first counterexample is kept.
    pub fn fail(&mut self, counterexample: Value) {
        if self.status == Status::Pass {
            self.status = Status::Fail;
            self.counterexample = Some(counterexample);
        }
    }

    pub fn with_result(mut self, failure: Option<Value>) -> Self {
        if let Some(c) = failure {
            self.fail(c);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.check_id.as_str())
            .collect()
    }
}
