//! Sweep reports: JSON documents and flat CSV tables.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hilbert::{ProfileRow, Verdict};

use super::certificate::WitnessCertificate;

/// Stated at the top of every report.
pub const WITNESS_SEMANTICS: &str = "Witness semantics: each verdict is computed exactly over F_p for one explicit \
configuration. Maximal rank of a single transversal configuration over F_p certifies maximal rank for the general \
configuration over the algebraic closure, because matrix rank is lower semicontinuous and the configuration lifts; \
the statements concern an algebraically closed field of characteristic 0, which is not reproduced directly. A failure \
to find a witness is evidence of genuine defectivity only when it reproduces across several primes.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    WitnessFound,
    AttemptsExhausted,
    /// Defective twists that reproduce across every prime and sample.
    DefectPattern,
    /// A check with no witness to keep, which held.
    Holds,
    /// A check that failed.
    Violation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    pub h0: usize,
    pub h1: usize,
    pub verdict: Verdict,
    /// Maximal-rank samples out of all samples, for evidence sweeps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<(usize, usize)>,
}

impl From<&ProfileRow> for CellRow {
    fn from(r: &ProfileRow) -> Self {
        CellRow {
            t: Some(r.t),
            h0: r.h0,
            h1: r.h1,
            verdict: r.verdict,
            rate: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellOutcome {
    pub params: BTreeMap<String, u64>,
    pub status: CellStatus,
    pub attempts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub rows: Vec<CellRow>,
    /// Index into the report's certificates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CellOutcome {
    pub fn new(params: &[(&str, u64)], status: CellStatus) -> Self {
        CellOutcome {
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            status,
            attempts: 0,
            family: None,
            rows: Vec::new(),
            certificate: None,
            note: None,
        }
    }

    pub fn param(&self, key: &str) -> Option<u64> {
        self.params.get(key).copied()
    }

    fn params_label(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub cells: usize,
    pub witnesses: usize,
    pub exhausted: usize,
    pub defect_patterns: usize,
    pub holds: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub semantics: String,
    pub seed: u64,
    pub primes: Vec<u64>,
    pub parameters: BTreeMap<String, String>,
    pub cells: Vec<CellOutcome>,
    pub certificates: Vec<WitnessCertificate>,
    pub summary: Summary,
    /// Exhausted searches for statements that are known to hold.
    pub red_flags: Vec<String>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64, primes: Vec<u64>) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            semantics: WITNESS_SEMANTICS.to_string(),
            seed,
            primes,
            parameters: BTreeMap::new(),
            cells: Vec::new(),
            certificates: Vec::new(),
            summary: Summary::default(),
            red_flags: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn parameter(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    /// Appends a cell and its certificate, in call order.
    pub fn push(&mut self, mut cell: CellOutcome, cert: Option<WitnessCertificate>) {
        if let Some(c) = cert {
            cell.certificate = Some(self.certificates.len());
            self.certificates.push(c);
        }
        self.cells.push(cell);
    }

    /// Recomputes the summary; `guaranteed` marks exhausted cells as red
    /// flags.
    pub fn finish(&mut self, guaranteed: bool) {
        let mut s = Summary {
            cells: self.cells.len(),
            ..Summary::default()
        };
        for c in &self.cells {
            match c.status {
                CellStatus::WitnessFound => s.witnesses += 1,
                CellStatus::AttemptsExhausted => {
                    s.exhausted += 1;
                    if guaranteed {
                        self.red_flags.push(format!(
                            "SEARCH EXHAUSTED at {} after {} attempts",
                            c.params_label(),
                            c.attempts
                        ));
                    }
                }
                CellStatus::DefectPattern => s.defect_patterns += 1,
                CellStatus::Holds => s.holds += 1,
                CellStatus::Violation => {
                    s.violations += 1;
                    self.red_flags.push(format!(
                        "VIOLATION at {}: {}",
                        c.params_label(),
                        c.note.as_deref().unwrap_or("check failed")
                    ));
                }
            }
        }
        self.summary = s;
    }

    /// True when nothing was exhausted or violated.
    pub fn is_clean(&self) -> bool {
        self.summary.exhausted == 0 && self.summary.violations == 0
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per (cell, twist); the semantics statement leads as a comment.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# {}", self.semantics)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "experiment",
            "params",
            "status",
            "family",
            "t",
            "h0",
            "h1",
            "verdict",
            "maximal_rank_samples",
            "samples",
            "certificate",
        ])?;
        for c in &self.cells {
            let cert = c.certificate.map(|i| i.to_string()).unwrap_or_default();
            let status = serde_json::to_value(c.status)?
                .as_str()
                .unwrap_or_default()
                .to_string();
            let family = c.family.clone().unwrap_or_default();
            if c.rows.is_empty() {
                w.write_record([
                    self.experiment.as_str(),
                    &c.params_label(),
                    &status,
                    &family,
                    "",
                    "",
                    "",
                    "",
                    "",
                    "",
                    &cert,
                ])?;
            }
            for r in &c.rows {
                let (ok, total) = r
                    .rate
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .unwrap_or_default();
                w.write_record([
                    self.experiment.as_str(),
                    &c.params_label(),
                    &status,
                    &family,
                    &r.t.map(|t| t.to_string()).unwrap_or_default(),
                    &r.h0.to_string(),
                    &r.h1.to_string(),
                    &r.verdict.to_string(),
                    &ok,
                    &total,
                    &cert,
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// A short human-readable digest for the terminal.
    pub fn render_summary(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "{}: {} cells, {} witnesses, {} exhausted, {} defect patterns, {} checks held, {} violations\n",
            self.experiment, s.cells, s.witnesses, s.exhausted, s.defect_patterns, s.holds, s.violations
        );
        for f in &self.red_flags {
            out.push_str(&format!("  !! {f}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}
