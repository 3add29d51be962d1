use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

/// How far a result can be trusted; decides the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confidence {
    Definite,
    Bounded,
}

/// One command's result, rendered as text or JSON from the same data.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub universe: Option<String>,
    pub verdict: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assumptions: Option<Value>,
    pub mode: String,
    pub budget_used: u64,
    pub wall_ms: u64,
    #[serde(skip)]
    pub lines: Vec<String>,
    #[serde(skip)]
    pub confidence: Confidence,
}

impl Report {
    pub fn new(command: &str, universe: Option<String>) -> Report {
        Report {
            command: command.to_string(),
            universe,
            verdict: Value::Null,
            witness: None,
            bound: None,
            trace: None,
            assumptions: None,
            mode: "exact".to_string(),
            budget_used: 0,
            wall_ms: 0,
            lines: Vec::new(),
            confidence: Confidence::Definite,
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    /// Marks the result as bounded, keeping the smallest bound seen.
    pub fn bounded(&mut self, bound: u32) {
        self.confidence = Confidence::Bounded;
        self.bound = Some(self.bound.map_or(bound, |b| b.min(bound)));
        self.mode = format!("bounded({})", self.bound.unwrap_or(bound));
    }

    /// Marks the result as undecided without a specific bound.
    pub fn inconclusive(&mut self) {
        self.confidence = Confidence::Bounded;
        if self.mode == "exact" {
            self.mode = "inconclusive".to_string();
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(u) = &self.universe {
            let _ = writeln!(out, "universe: {u}");
        }
        for l in &self.lines {
            let _ = writeln!(out, "{l}");
        }
        let _ = writeln!(out, "mode: {}", self.mode);
        let _ = write!(out, "work: {} steps, {} ms", self.budget_used, self.wall_ms);
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
