//! Check results shared by every verification routine and the command line.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Pass, detail: None }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Fail, detail: Some(detail.into()) }
    }

    pub fn skipped(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Skipped, detail: Some(detail.into()) }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            let mut c = Self::pass(name);
            let d = detail.into();
            if !d.is_empty() {
                c.detail = Some(d);
            }
            c
        } else {
            Self::fail(name, detail)
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Counts of pass, fail and skipped checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

pub fn tally(checks: &[Check]) -> Tally {
    let mut t = Tally::default();
    for c in checks {
        match c.status {
            Status::Pass => t.pass += 1,
            Status::Fail => t.fail += 1,
            Status::Skipped => t.skipped += 1,
        }
    }
    t
}

pub fn first_failure(checks: &[Check]) -> Option<&Check> {
    checks.iter().find(|c| c.status == Status::Fail)
}

/// A row of the `dims` table: a label and one value per degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimRow {
    pub label: String,
    pub values: Vec<usize>,
}

/// The structured document printed by the command line.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub key: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub solutions: Vec<BTreeMap<String, String>>,
    pub dims: Vec<DimRow>,
    pub timings_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(command: impl Into<String>, key: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            key: key.into(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            passed: true,
            solutions: Vec::new(),
            dims: Vec::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, name: &str, value: impl Serialize) {
        self.parameters.insert(name.to_string(), serde_json::to_value(value).expect("serializable parameter"));
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
        self.passed = self.checks.iter().all(Check::passed);
    }

    pub fn push(&mut self, check: Check) {
        self.extend([check]);
    }

    pub fn finish(&mut self) {
        self.passed = self.checks.iter().all(Check::passed);
    }
}
