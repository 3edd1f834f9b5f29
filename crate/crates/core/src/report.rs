//! Verification reports shared by the identity and conjecture checkers.

use std::fmt;

use serde::Serialize;

/// The smallest failing instance of a check, with the partitions behind it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub identity_id: String,
    pub n: i64,
    pub lhs: i128,
    pub rhs: i128,
    /// `source -> image` lines for the partitions the statistic counts.
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub identity_id: String,
    pub n: i64,
    pub lhs: i128,
    pub rhs: i128,
    pub status: Status,
}

/// Rows for one reading of one identity.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub identity_id: String,
    pub reading: String,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
    /// Witness for the first failing row, when one was collected.
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub(crate) fn new(identity_id: impl Into<String>, reading: impl Into<String>) -> Self {
        Self {
            identity_id: identity_id.into(),
            reading: reading.into(),
            rows: Vec::new(),
            notes: Vec::new(),
            counterexample: None,
        }
    }

    pub(crate) fn compare(&mut self, n: i64, lhs: i128, rhs: i128) {
        self.push_row(self.identity_id.clone(), n, lhs, rhs);
    }

    pub(crate) fn push_row(&mut self, identity_id: String, n: i64, lhs: i128, rhs: i128) {
        let status = if lhs == rhs { Status::Pass } else { Status::Fail };
        self.rows.push(ReportRow { identity_id, n, lhs, rhs, status });
    }

    pub(crate) fn skip(&mut self, n: i64, lhs: i128, rhs: i128, why: String) {
        self.rows.push(ReportRow {
            identity_id: self.identity_id.clone(),
            n,
            lhs,
            rhs,
            status: Status::Skipped,
        });
        self.notes.push(why);
    }

    /// No failing row and at least one passing row.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != Status::Fail) && self.rows.iter().any(|r| r.status == Status::Pass)
    }

    pub fn first_failure(&self) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }
}

pub const CSV_HEADER: &str = "identity_id,n,lhs,rhs,status";

/// `identity_id,n,lhs,rhs,status` lines, header first.
pub fn rows_to_csv<'a>(rows: impl IntoIterator<Item = &'a ReportRow>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.identity_id, r.n, r.lhs, r.rhs, r.status));
    }
    out
}

