//! Pass/fail reports shared by the verification operations. Every check is an
//! exact identity; `detail` records the first counterexample when one exists.

use std::fmt;

#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub checks: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new() -> CheckReport {
        CheckReport { checks: Vec::new() }
    }

    pub fn record(&mut self, name: impl Into<String>, pass: bool, detail: Option<String>) {
        self.checks.push(CheckItem {
            name: name.into(),
            pass,
            detail,
        });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckItem> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "[{}] {}{}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.detail
                    .as_ref()
                    .map(|d| format!(" ({d})"))
                    .unwrap_or_default()
            )?;
        }
        Ok(())
    }
}
