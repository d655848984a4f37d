//! Verification results in human-readable and JSON form.

use serde::{Deserialize, Serialize};

use crate::format::sig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported for reference only; never fails the run.
    Info,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        }
    }
}

/// Acceptance condition of a hard check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Bound {
    /// measured ≤ value. A zero tolerance counts as unattainable and fails.
    AtMost(f64),
    /// measured > 0, e.g. the smallest gap of a strict ordering.
    Positive,
    /// measured == 0 exactly.
    Zero,
}

impl Bound {
    pub fn admits(self, measured: f64) -> bool {
        match self {
            Bound::AtMost(v) => v > 0.0 && measured <= v,
            Bound::Positive => measured > 0.0,
            Bound::Zero => measured == 0.0,
        }
    }

    fn describe(self) -> String {
        match self {
            Bound::AtMost(v) => format!("<= {}", sig(v, 6)),
            Bound::Positive => "> 0".into(),
            Bound::Zero => "== 0".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Worst deviation observed; `None` when the check errored before measuring.
    pub measured: Option<f64>,
    /// `None` for informational checks.
    pub bound: Option<Bound>,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl VerificationReport {
    pub fn hard(&mut self, name: &str, measured: f64, bound: Bound, detail: String, seconds: f64) {
        let status = if bound.admits(measured) { Status::Pass } else { Status::Fail };
        self.checks.push(Check {
            name: name.into(),
            status,
            measured: Some(measured),
            bound: Some(bound),
            detail,
            seconds,
        });
    }

    /// A hard check that could not be evaluated.
    pub fn errored(&mut self, name: &str, bound: Bound, error: String, seconds: f64) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Fail,
            measured: None,
            bound: Some(bound),
            detail: error,
            seconds,
        });
    }

    pub fn info(&mut self, name: &str, measured: Option<f64>, detail: String, seconds: f64) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Info,
            measured,
            bound: None,
            detail,
            seconds,
        });
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// One line per check, then a summary line.
    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let measured = c.measured.map(|m| sig(m, 6)).unwrap_or_else(|| "-".into());
            let bound = c.bound.map(|b| format!(" {}", b.describe())).unwrap_or_default();
            out.push_str(&format!(
                "{} {:width$}  {measured}{bound}  [{:.2}s]  {}\n",
                c.status.label(),
                c.name,
                c.seconds,
                c.detail,
            ));
        }
        let hard = self.checks.iter().filter(|c| c.status != Status::Info).count();
        out.push_str(&format!(
            "{} of {hard} hard checks passed in {:.2}s\n",
            hard - self.failures(),
            self.seconds
        ));
        out
    }
}
