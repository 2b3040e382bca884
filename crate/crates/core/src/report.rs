//! Verification report records shared by every check in the crate.

use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Which procedure decided a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecisionPath {
    #[serde(rename = "exact-symbolic")]
    ExactSymbolic,
    #[serde(rename = "numeric-oracle")]
    NumericOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub mode: String,
    pub status: Status,
    pub decision_path: DecisionPath,
    pub max_abs_error: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Wall-clock time. Left out of serialized output unless timings are requested,
    /// so that repeated runs produce identical bytes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn without_timing(mut self) -> Self {
        self.duration_ms = None;
        self
    }
}

/// Accumulates sub-check outcomes and produces a [`VerificationReport`].
#[derive(Debug)]
pub struct ReportBuilder {
    name: String,
    mode: String,
    path: DecisionPath,
    tolerance: f64,
    max_err: f64,
    ok: bool,
    witness: Option<String>,
    notes: Vec<String>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(name: impl Into<String>, mode: impl Into<String>, path: DecisionPath, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            mode: mode.into(),
            path,
            tolerance,
            max_err: 0.0,
            ok: true,
            witness: None,
            notes: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn path(&mut self, path: DecisionPath) -> &mut Self {
        self.path = path;
        self
    }

    /// Records a measured error; fails the report if it exceeds the tolerance.
    pub fn error(&mut self, err: f64, witness: impl FnOnce() -> String) -> &mut Self {
        let bad = err.is_nan() || err > self.tolerance;
        if err > self.max_err || err.is_nan() {
            self.max_err = err;
        }
        if bad {
            self.ok = false;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
        self
    }

    /// Records a boolean sub-check.
    pub fn require(&mut self, cond: bool, witness: impl FnOnce() -> String) -> &mut Self {
        if !cond {
            self.ok = false;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn witness(&mut self, w: impl Into<String>) -> &mut Self {
        if self.witness.is_none() {
            self.witness = Some(w.into());
        }
        self
    }

    pub fn is_ok(&self) -> bool {
        self.ok && self.max_err <= self.tolerance
    }

    pub fn finish(self) -> VerificationReport {
        let pass = self.is_ok();
        VerificationReport {
            check_name: self.name,
            mode: self.mode,
            status: if pass { Status::Pass } else { Status::Fail },
            decision_path: self.path,
            max_abs_error: self.max_err,
            tolerance: self.tolerance,
            witness: self.witness,
            duration_ms: Some(self.started.elapsed().as_millis() as u64),
            notes: self.notes,
        }
    }
}
