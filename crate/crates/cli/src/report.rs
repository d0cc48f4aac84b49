//! Structured experiment reports.
//!
//! The JSON form has stable key order and no timing fields, so re-running
//! a report's echoed config reproduces it byte for byte. The text form is
//! a human summary (with elapsed time appended); the CSV form exports the
//! exhibit table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use ramsey_core::verify::WitnessReport;
use ramsey_core::{SortId, SortedPrefix};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportStatus {
    Verified,
    Refuted,
    Inconclusive,
    Computed,
}

impl ReportStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            ReportStatus::Verified | ReportStatus::Computed => 0,
            ReportStatus::Refuted => 1,
            ReportStatus::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ReportStatus::Verified => "verified",
            ReportStatus::Refuted => "refuted",
            ReportStatus::Inconclusive => "inconclusive",
            ReportStatus::Computed => "computed",
        }
    }
}

/// One row of the exhibit table: an element, which side of the coloring
/// it fell on, and its provenance term and source block when available.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhibitRow {
    pub label: String,
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_coloring: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<Vec<usize>>,
}

/// A self-contained experiment report. `config` echoes the exact
/// configuration, so the run can be reproduced from the report alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: ReportStatus,
    pub summary: String,
    pub bounds: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub counts: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exhibits: Vec<ExhibitRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub items: Vec<String>,
    pub config: ExperimentConfig,
}

impl Report {
    pub fn new(command: &str, status: ReportStatus, summary: String, config: &ExperimentConfig) -> Self {
        Report {
            command: command.to_string(),
            status,
            summary,
            bounds: BTreeMap::new(),
            flags: Vec::new(),
            notes: Vec::new(),
            counts: BTreeMap::new(),
            candidate: None,
            exhibits: Vec::new(),
            items: Vec::new(),
            config: config.clone(),
        }
    }

    /// Folds a verifier report into a CLI report, rendering elements and
    /// terms as text.
    pub fn from_witness(command: &str, w: &WitnessReport, config: &ExperimentConfig) -> Self {
        let status = match w.status {
            ramsey_core::Status::Verified => ReportStatus::Verified,
            ramsey_core::Status::Refuted => ReportStatus::Refuted,
            ramsey_core::Status::Inconclusive => ReportStatus::Inconclusive,
        };
        let summary = format!("{}: {}", w.theorem_id, status.as_str());
        let mut report = Report::new(command, status, summary, config);
        report.bounds = w.bounds.clone();
        report.flags = w.flags.clone();
        report.notes = w.notes.clone();
        report
            .counts
            .insert("candidates_swept".into(), w.candidates_swept as u64);
        report
            .counts
            .insert("mixed_candidates".into(), w.mixed_candidates as u64);
        report.candidate = w.candidate.as_ref().map(render_prefix);
        report.exhibits = w
            .exhibits
            .iter()
            .map(|e| ExhibitRow {
                label: e.label.clone(),
                value: e.element.to_string(),
                in_coloring: e.in_coloring,
                term: e.term.as_ref().map(|t| t.render(&w.signature)),
                block: e.block.clone(),
            })
            .collect();
        report
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn render_text(&self, elapsed_ms: Option<u128>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "status: {}", self.status.as_str());
        let _ = writeln!(out, "summary: {}", self.summary);
        if !self.bounds.is_empty() {
            let _ = writeln!(out, "bounds:");
            for (k, v) in &self.bounds {
                let _ = writeln!(out, "  {k}: {v}");
            }
        }
        for (k, v) in &self.counts {
            let _ = writeln!(out, "{k}: {v}");
        }
        for flag in &self.flags {
            let _ = writeln!(out, "flag: {flag}");
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        if let Some(candidate) = &self.candidate {
            let _ = writeln!(out, "candidate: {}", candidate.join(" | "));
        }
        for (i, e) in self.exhibits.iter().enumerate() {
            let mut line = format!("exhibit[{i}]: {} = {}", e.label, e.value);
            if let Some(inside) = e.in_coloring {
                let _ = write!(line, " ({})", if inside { "in" } else { "out" });
            }
            if let Some(term) = &e.term {
                let _ = write!(line, " via {term}");
            }
            if let Some(block) = &e.block {
                let _ = write!(line, " on {block:?}");
            }
            let _ = writeln!(out, "{line}");
        }
        for item in &self.items {
            let _ = writeln!(out, "item: {item}");
        }
        let _ = writeln!(out, "config: {}", self.config.serialize());
        if let Some(ms) = elapsed_ms {
            let _ = writeln!(out, "elapsed_ms: {ms}");
        }
        out
    }

    /// Exhibit table (or the item list when there are no exhibits).
    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        if self.exhibits.is_empty() && !self.items.is_empty() {
            out.push_str("item\n");
            for item in &self.items {
                let _ = writeln!(out, "{}", csv_field(item));
            }
            return out;
        }
        out.push_str("label,value,in_coloring,term,block\n");
        for e in &self.exhibits {
            let in_coloring = e
                .in_coloring
                .map(|b| b.to_string())
                .unwrap_or_default();
            let term = e.term.clone().unwrap_or_default();
            let block = e
                .block
                .as_ref()
                .map(|b| {
                    b.iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&e.label),
                csv_field(&e.value),
                in_coloring,
                csv_field(&term),
                csv_field(&block)
            );
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders a sorted prefix as `sort:value` entries.
pub fn render_prefix(p: &SortedPrefix) -> Vec<String> {
    p.items
        .iter()
        .zip(&p.word.prefix)
        .map(|(e, &s)| {
            let sort = if s == SortId::SCALAR { "scalar" } else { "matrix" };
            format!("{sort}:{e}")
        })
        .collect()
}
