//! Pass/fail records produced by the verification routines.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::cyclo::CycNum;
use crate::error::Result;
use crate::series::Series;

/// One identity instance. On failure `monomial`, `lhs` and `rhs` locate the first
/// differing coefficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Report {
        Report {
            name: name.into(),
            checks: Vec::new(),
        }
    }

    /// Compare two series coefficientwise below their common precision.
    pub fn series(&mut self, label: impl Into<String>, lhs: &Series, rhs: &Series) -> Result<bool> {
        let label = label.into();
        let check = match lhs.first_difference(rhs)? {
            None => Check::pass(label),
            Some(m) => Check {
                label,
                pass: false,
                monomial: Some(m.exponents.iter().map(|r| r.to_string()).collect()),
                lhs: Some(m.lhs.to_string()),
                rhs: Some(m.rhs.to_string()),
                detail: None,
            },
        };
        let ok = check.pass;
        self.checks.push(check);
        Ok(ok)
    }

    pub fn value(&mut self, label: impl Into<String>, lhs: &CycNum, rhs: &CycNum) -> bool {
        let ok = lhs == rhs;
        self.checks.push(Check {
            label: label.into(),
            pass: ok,
            monomial: None,
            lhs: (!ok).then(|| lhs.to_string()),
            rhs: (!ok).then(|| rhs.to_string()),
            detail: None,
        });
        ok
    }

    pub fn flag(&mut self, label: impl Into<String>, pass: bool, detail: Option<String>) -> bool {
        self.checks.push(Check {
            label: label.into(),
            pass,
            monomial: None,
            lhs: None,
            rhs: None,
            detail,
        });
        pass
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.failures().next()
    }

    pub fn to_json(&self) -> Value {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        serde_json::json!({
            "name": self.name,
            "pass": self.passed(),
            "total": self.checks.len(),
            "passed": passed,
            "first_failure": self.first_failure(),
            "checks": self.checks,
        })
    }
}

impl Check {
    pub fn pass(label: String) -> Check {
        Check {
            label,
            pass: true,
            monomial: None,
            lhs: None,
            rhs: None,
            detail: None,
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.checks.iter().filter(|c| c.pass).count();
        write!(f, "{}: {}/{} passed", self.name, ok, self.checks.len())?;
        if let Some(c) = self.first_failure() {
            write!(f, "; first failure {}", c.label)?;
            if let (Some(m), Some(l), Some(r)) = (&c.monomial, &c.lhs, &c.rhs) {
                write!(f, " at [{}]: {} != {}", m.join(", "), l, r)?;
            }
            if let Some(d) = &c.detail {
                write!(f, " ({d})")?;
            }
        }
        Ok(())
    }
}
