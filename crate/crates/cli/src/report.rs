//! Reports: one data model rendered as JSON or as text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

pub const SCHEMA: &str = "codepth-report/1";

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub schema: String,
    pub scenario: String,
    pub field: String,
    pub ring: String,
    pub ideal: Vec<String>,
    pub budget: String,
    pub steps: Vec<StepReport>,
    /// Flat `step.key -> value` map that expectations are checked against.
    pub outcomes: BTreeMap<String, String>,
    pub expectation: Expectation,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dumps: Vec<String>,
    /// Wall time in milliseconds; only present when timing is requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StepReport {
    pub id: String,
    pub command: String,
    pub sections: Vec<Section>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub slices: Vec<SliceRow>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn status(mut self, s: impl Into<String>) -> Self {
        self.status = Some(s.into());
        self
    }

    pub fn line(mut self, s: impl Into<String>) -> Self {
        self.lines.push(s.into());
        self
    }

    /// Appends every line of a multi-line description.
    pub fn text(mut self, s: &str) -> Self {
        self.lines.extend(s.lines().filter(|l| !l.trim().is_empty()).map(|l| l.to_string()));
        self
    }
}

/// One row of a slice table.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SliceRow {
    /// Which table the row belongs to: a cohomological index or a step.
    pub table: String,
    pub grade: Vec<i64>,
    /// Colimit dimension when the data are exact or stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub stability: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Expectation {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Mismatch {
    pub key: String,
    pub expected: String,
    pub actual: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario {}", self.scenario);
        let _ = writeln!(s, "ring {} over {}", self.ring, self.field);
        let _ = writeln!(s, "ideal ({})", self.ideal.join(", "));
        let _ = writeln!(s, "budget {}", self.budget);
        for step in &self.steps {
            let _ = writeln!(s, "\n[{}] {}", step.id, step.command);
            for sec in &step.sections {
                match &sec.status {
                    Some(st) => {
                        let _ = writeln!(s, "== {}: {}", sec.title, st);
                    }
                    None => {
                        let _ = writeln!(s, "== {}", sec.title);
                    }
                }
                for l in &sec.lines {
                    let _ = writeln!(s, "  {l}");
                }
                for r in &sec.slices {
                    let g: Vec<String> = r.grade.iter().map(|a| a.to_string()).collect();
                    let dim = r.dim.map(|d| d.to_string()).unwrap_or_else(|| "?".into());
                    let _ = writeln!(s, "  | {} ({}) dim {} {} | {}", r.table, g.join(","), dim, r.stability, r.detail);
                }
            }
        }
        let _ = writeln!(s, "\noutcomes");
        for (k, v) in &self.outcomes {
            let _ = writeln!(s, "  {k} = {v}");
        }
        let _ = writeln!(
            s,
            "expectations checked {}, mismatches {}",
            self.expectation.checked,
            self.expectation.mismatches.len()
        );
        for m in &self.expectation.mismatches {
            let _ = writeln!(s, "  {} expected {} got {}", m.key, m.expected, m.actual);
        }
        for d in &self.dumps {
            s.push('\n');
            s.push_str(d);
        }
        if let Some(ms) = self.wall_ms {
            let _ = writeln!(s, "wall time {ms} ms");
        }
        let _ = writeln!(s, "exit {}", self.exit_code);
        s
    }
}
