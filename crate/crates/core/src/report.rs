//! Deterministic, diff-friendly verification reports: one line per check,
//! a closing summary line, and CSV export for structure-constant tables.
//! Every numeric is an exact rational `p/q`; no timing or other
//! run-dependent data ever enters a report.

use std::fmt::Write as _;

use crate::rational::format_rat;
use crate::twist::{MembershipOutcome, QuotientAlgebra};
use crate::voa::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Certified,
    Inconclusive,
}

impl Status {
    pub fn tag(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Certified => "certified",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Record {
    pub name: String,
    pub inputs: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    records: Vec<Record>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(
        &mut self,
        name: impl Into<String>,
        inputs: impl Into<String>,
        status: Status,
        detail: impl Into<String>,
    ) {
        self.records.push(Record {
            name: name.into(),
            inputs: inputs.into(),
            status,
            detail: detail.into(),
        });
    }

    pub fn push_verdict(
        &mut self,
        name: impl Into<String>,
        inputs: impl Into<String>,
        verdict: &Verdict,
    ) {
        match verdict {
            Verdict::Pass => self.push(name, inputs, Status::Pass, ""),
            Verdict::Fail(w) => self.push(name, inputs, Status::Fail, w.clone()),
        }
    }

    pub fn push_membership(
        &mut self,
        name: impl Into<String>,
        inputs: impl Into<String>,
        outcome: &MembershipOutcome,
    ) {
        match outcome {
            MembershipOutcome::Certified(cert) => self.push(
                name,
                inputs,
                Status::Certified,
                format!("level={} terms={}", cert.level, cert.terms.len()),
            ),
            MembershipOutcome::Inconclusive { max_level } => self.push(
                name,
                inputs,
                Status::Inconclusive,
                format!("max_level={max_level}"),
            ),
        }
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }

    pub fn has_failures(&self) -> bool {
        self.count(Status::Fail) > 0
    }

    pub fn has_inconclusive(&self) -> bool {
        self.count(Status::Inconclusive) > 0
    }

    /// 0 = all pass/certified; 1 = hard failure; 3 = inconclusive present.
    pub fn exit_code(&self) -> i32 {
        if self.has_failures() {
            1
        } else if self.has_inconclusive() {
            3
        } else {
            0
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = write!(out, "check name={} inputs=[{}] status={}", r.name, r.inputs, r.status.tag());
            if r.detail.is_empty() {
                out.push('\n');
            } else {
                let _ = writeln!(out, " detail=[{}]", r.detail);
            }
        }
        let _ = writeln!(
            out,
            "summary total={} pass={} fail={} certified={} inconclusive={}",
            self.records.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Certified),
            self.count(Status::Inconclusive),
        );
        out
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }
}

/// Structure constants as CSV: one row per nonzero c_{ij}^k, exact `p/q`.
pub fn structure_constants_csv(q: &QuotientAlgebra) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# quotient approximation kind={} {} window={} level={}",
        q.kind.tag(),
        q.tw,
        q.window,
        q.level
    );
    let _ = writeln!(out, "i,j,k,rep_i,rep_j,rep_k,value");
    for (i, ri) in q.reps.iter().enumerate() {
        for (j, rj) in q.reps.iter().enumerate() {
            for (k, c) in q.constants[i][j].iter() {
                let _ = writeln!(
                    out,
                    "{i},{j},{k},{ri},{rj},{},{}",
                    q.reps[*k],
                    format_rat(c)
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_exit_codes() {
        let mut r = Report::new();
        r.push("a", "x=1", Status::Pass, "");
        assert_eq!(r.exit_code(), 0);
        r.push("b", "x=2", Status::Inconclusive, "max_level=4");
        assert_eq!(r.exit_code(), 3);
        r.push("c", "x=3", Status::Fail, "oops");
        assert_eq!(r.exit_code(), 1);
        let text = r.render();
        assert!(text.contains("check name=a inputs=[x=1] status=pass"));
        assert!(text.ends_with("summary total=3 pass=1 fail=1 certified=0 inconclusive=1\n"));
        // rendering is a pure function of the records
        assert_eq!(text, r.render());
    }
}
