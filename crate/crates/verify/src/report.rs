// SPDX-License-Identifier: Apache-2.0

//! Verification reports: a line-oriented text form and a JSON form.

use std::fmt::{self, Write as _};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Verified => "verified",
            Self::Refuted => "refuted",
            Self::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Self::Verified => 0,
            Self::Refuted => 1,
            Self::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One exact value or certificate item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
    pub certificate: Vec<Entry>,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict) -> Self {
        Self {
            name: name.into(),
            verdict,
            expected: None,
            certificate: Vec::new(),
        }
    }

    pub fn expect(mut self, v: Verdict) -> Self {
        self.expected = Some(v);
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.certificate.push(Entry {
            key: key.into(),
            value: value.to_string(),
        });
        self
    }

    pub fn add(&mut self, key: impl Into<String>, value: impl ToString) {
        self.certificate.push(Entry {
            key: key.into(),
            value: value.to_string(),
        });
    }

    pub fn matches_expected(&self) -> bool {
        self.expected.is_none_or(|e| e == self.verdict)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    /// Computed facts that are not checks.
    pub values: Vec<Entry>,
    pub checks: Vec<Check>,
    pub overall: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_expected: Option<bool>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            values: Vec::new(),
            checks: Vec::new(),
            overall: Verdict::Verified,
            matches_expected: None,
        }
    }

    pub fn value(&mut self, key: impl Into<String>, value: impl ToString) {
        self.values.push(Entry {
            key: key.into(),
            value: value.to_string(),
        });
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.overall = overall(&self.checks);
        self.matches_expected = self
            .checks
            .iter()
            .any(|c| c.expected.is_some())
            .then(|| self.checks.iter().all(Check::matches_expected));
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        self.overall.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for e in &self.values {
            write_entry(&mut out, "", e);
        }
        for (i, c) in self.checks.iter().enumerate() {
            let _ = write!(out, "check {} {}: {}", i + 1, c.name, c.verdict);
            if let Some(e) = c.expected {
                let _ = write!(out, " (expected {e})");
            }
            out.push('\n');
            for e in &c.certificate {
                write_entry(&mut out, "  ", e);
            }
        }
        let _ = writeln!(out, "overall: {}", self.overall);
        if let Some(m) = self.matches_expected {
            let _ = writeln!(out, "matches expected: {}", if m { "yes" } else { "no" });
        }
        out
    }
}

fn write_entry(out: &mut String, indent: &str, e: &Entry) {
    let mut lines = e.value.lines();
    let first = lines.next().unwrap_or("");
    let _ = writeln!(out, "{indent}{}: {first}", e.key);
    for l in lines {
        let _ = writeln!(out, "{indent}  {l}");
    }
}

/// Verified only if every check is; any refutation wins over
/// inconclusive.
pub fn overall(checks: &[Check]) -> Verdict {
    if checks.iter().any(|c| c.verdict == Verdict::Refuted) {
        Verdict::Refuted
    } else if checks.iter().all(|c| c.verdict == Verdict::Verified) {
        Verdict::Verified
    } else {
        Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_rules() {
        let v = Check::new("a", Verdict::Verified);
        let r = Check::new("b", Verdict::Refuted);
        let i = Check::new("c", Verdict::Inconclusive);
        assert_eq!(overall(std::slice::from_ref(&v)), Verdict::Verified);
        assert_eq!(overall(&[v.clone(), i.clone()]), Verdict::Inconclusive);
        assert_eq!(overall(&[v, i, r]), Verdict::Refuted);
        assert_eq!(overall(&[]), Verdict::Verified);
    }

    #[test]
    fn text_form() {
        let mut r = Report::new("demo");
        r.push(
            Check::new("x", Verdict::Refuted)
                .expect(Verdict::Refuted)
                .with("gram", "[[0, 2], [2, 0]]"),
        );
        assert_eq!(
            r.to_text(),
            "command: demo\ncheck 1 x: refuted (expected refuted)\n  gram: [[0, 2], [2, 0]]\noverall: refuted\nmatches expected: yes\n"
        );
        assert_eq!(r.exit_code(), 1);
        assert!(r.to_json().contains("\"overall\": \"refuted\""));
    }
}
