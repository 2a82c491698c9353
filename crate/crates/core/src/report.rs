//! Check outcomes shared by every verification routine.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One verified claim. A failing result always carries a concrete witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub witness: String,
    pub citations: Vec<String>,
    pub millis: u64,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, ok: bool, witness: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness: witness.into(),
            citations: Vec::new(),
            millis: 0,
        }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        CheckResult { status: Status::Skipped, ..Self::new(name, true, why) }
    }

    pub fn cite(mut self, anchor: impl Into<String>) -> Self {
        self.citations.push(anchor.into());
        self
    }

    pub fn with_millis(mut self, millis: u64) -> Self {
        self.millis = millis;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// True when no result in the slice failed.
pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.status != Status::Fail)
}
