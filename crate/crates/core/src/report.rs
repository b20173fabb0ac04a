//! Deterministic CSV and text rendering of certificates and check records.

use crate::decide::DecisionCertificate;
use crate::error::{Error, Result};
use crate::verdict::{format_number, render_pairs};
use crate::verify::CheckRecord;
use std::fmt::Write as _;
use std::path::Path;

pub const CSV_HEADER: [&str; 10] =
    ["record", "id", "section", "check", "subject", "status", "witness", "counterexample", "horizon", "note"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub certificates: Vec<DecisionCertificate>,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn is_empty(&self) -> bool {
        self.certificates.is_empty() && self.checks.is_empty()
    }

    /// One row per verdict, then a conclusion row per certificate, then one
    /// row per check record.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
        w.write_record(CSV_HEADER).map_err(io)?;
        for (k, c) in self.certificates.iter().enumerate() {
            let id = format!("certificate-{}", k + 1);
            for r in c.rows() {
                let v = &r.verdict;
                w.write_record([
                    "verdict",
                    &id,
                    r.section,
                    &r.check,
                    &r.subject,
                    v.status.as_str(),
                    &render_pairs(&v.witness),
                    &render_pairs(&v.counterexample),
                    &render_pairs(&v.horizon),
                    &v.note,
                ])
                .map_err(io)?;
            }
            let subject = format!("{} in {}", c.space_a, c.space_b);
            w.write_record(["conclusion", &id, "decision", "inclusion", &subject, c.conclusion.as_str(), "", "", "", &c.reason])
                .map_err(io)?;
        }
        for r in &self.checks {
            let witness = format!("observed={};tolerance={}", format_number(r.observed), format_number(r.tolerance));
            let status = if r.passed { "pass" } else { "fail" };
            w.write_record(["check", r.suite.as_str(), r.suite.as_str(), &r.name, "", status, &witness, "", "", &r.detail])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        if self.is_empty() {
            s.push_str("empty report\n");
            return s;
        }
        for (k, c) in self.certificates.iter().enumerate() {
            let _ = writeln!(s, "certificate {}: {}", k + 1, c.conclusion);
            let _ = writeln!(s, "  A = {}", c.space_a);
            let _ = writeln!(s, "  B = {}", c.space_b);
            let _ = writeln!(s, "  reason: {}", c.reason);
            for r in c.rows() {
                let _ = writeln!(s, "  [{}] {} on {}: {}", r.section, r.check, r.subject, r.verdict.status);
            }
        }
        if !self.checks.is_empty() {
            let passed = self.checks.iter().filter(|r| r.passed).count();
            let _ = writeln!(s, "checks: {passed}/{} passed", self.checks.len());
            for r in &self.checks {
                let _ = writeln!(
                    s,
                    "  {} {}/{}: observed {} vs {} ({})",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.suite,
                    r.name,
                    format_number(r.observed),
                    format_number(r.tolerance),
                    r.detail
                );
            }
        }
        s
    }

    /// Writes `certificate.csv` and `summary.txt` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidInput(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        std::fs::write(dir.join("certificate.csv"), self.to_csv()?).map_err(io)?;
        std::fs::write(dir.join("summary.txt"), self.summary()).map_err(io)?;
        Ok(())
    }
}
