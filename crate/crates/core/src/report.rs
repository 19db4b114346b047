//! Machine-readable experiment records shared by the CLI and the test suites.

use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

/// Version string embedded in every report.
pub const ARTIFACT_VERSION: &str = concat!("plancherel-v", env!("CARGO_PKG_VERSION"));

/// One named pass/fail check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::new(name, true, "")
    }

    /// Converts a fallible check into an assertion, keeping the error text.
    pub fn from_result<T>(name: impl Into<String>, r: crate::Result<T>) -> Self {
        match r {
            Ok(_) => Self::pass(name),
            Err(e) => Self::new(name, false, e.to_string()),
        }
    }
}

/// Serialized record of one command run. The timestamp is the only field
/// that varies between identical seeded runs.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub timestamp: String,
    pub command: String,
    pub version: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub results: Value,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn new(command: impl Into<String>) -> Self {
        let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Self {
            timestamp: format!("unix:{secs}"),
            command: command.into(),
            version: ARTIFACT_VERSION.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            results: Value::Null,
            assertions: Vec::new(),
            passed: true,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn results(mut self, results: impl Serialize) -> Self {
        self.results = serde_json::to_value(results).expect("report payload serializes");
        self
    }

    pub fn assert(&mut self, a: Assertion) {
        self.passed &= a.passed;
        self.assertions.push(a);
    }

    pub fn extend(&mut self, items: impl IntoIterator<Item = Assertion>) {
        for a in items {
            self.assert(a);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the timestamp blanked, for byte comparisons.
    pub fn to_masked_json(&self) -> String {
        let mut copy = self.clone();
        copy.timestamp = String::new();
        copy.to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_flip_passed() {
        let mut r = ExperimentReport::new("x").param("n", 3);
        r.assert(Assertion::pass("a"));
        assert!(r.passed);
        r.assert(Assertion::new("b", false, "broken"));
        assert!(!r.passed);
        assert_eq!(r.failures().count(), 1);
        assert!(r.to_masked_json().contains("\"timestamp\": \"\""));
    }
}
