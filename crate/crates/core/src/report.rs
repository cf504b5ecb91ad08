//! Machine-readable verification reports.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Current report schema version.
pub const SCHEMA_VERSION: u32 = 1;

/// One checked identity: `|lhs - rhs| ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CaseRecord {
    /// Builds a record and decides `pass` from the absolute difference.
    pub fn compare(name: &str, params: &[(&str, f64)], lhs: f64, rhs: f64, tolerance: f64) -> Self {
        CaseRecord {
            name: name.to_string(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            lhs,
            rhs,
            tolerance,
            pass: (lhs - rhs).abs() <= tolerance,
        }
    }

    /// A record whose pass flag was decided elsewhere (e.g. a statistical test).
    pub fn with_outcome(
        name: &str,
        params: &[(&str, f64)],
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        pass: bool,
    ) -> Self {
        CaseRecord {
            pass,
            ..Self::compare(name, params, lhs, rhs, tolerance)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub cases: Vec<CaseRecord>,
    pub overall: bool,
    /// Conditions worth a look that do not fail the run (e.g. heavy censoring).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport {
            schema: SCHEMA_VERSION,
            suite: suite.to_string(),
            cases: Vec::new(),
            overall: true,
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, case: CaseRecord) {
        self.overall &= case.pass;
        self.cases.push(case);
    }

    pub fn warn(&mut self, msg: String) {
        self.warnings.push(msg);
    }

    /// Appends the cases of `other`, keeping this report's suite name.
    pub fn merge(&mut self, other: VerificationReport) {
        for c in other.cases {
            self.push(c);
        }
        self.warnings.extend(other.warnings);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_tracks_cases() {
        let mut r = VerificationReport::new("demo");
        r.push(CaseRecord::compare(
            "a",
            &[("x", 1.0)],
            1.0,
            1.0 + 1e-12,
            1e-10,
        ));
        assert!(r.overall);
        r.push(CaseRecord::compare("b", &[], 1.0, 2.0, 1e-3));
        assert!(!r.overall);
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.schema, 1);
    }
}
