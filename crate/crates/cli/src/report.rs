//! The report printed by every command.

use std::fmt::Write;

use approx_algebra::closure::axioms::{Counterexample, Verdict};
use serde::Serialize;
use serde_json::Value;

use crate::Format;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    #[serde(rename = "tool-version")]
    pub tool_version: String,
    pub command: String,
    pub verdicts: Vec<Verdict>,
    pub counterexamples: Vec<Counterexample>,
    pub result: Value,
    /// Human-readable lines for table output.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            verdicts: Vec::new(),
            counterexamples: Vec::new(),
            result: Value::Object(Default::default()),
            lines: Vec::new(),
        }
    }

    pub fn push(&mut self, v: Verdict) {
        if let Some(ce) = &v.counterexample {
            self.counterexamples.push(ce.clone());
        }
        self.verdicts.push(v);
    }

    pub fn extend(&mut self, vs: impl IntoIterator<Item = Verdict>) {
        for v in vs {
            self.push(v);
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("serializable result");
        if let Value::Object(map) = &mut self.result {
            map.insert(key.into(), v);
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("serializable report");
                s.push('\n');
                s
            }
            Format::Table => self.table(),
        }
    }

    fn table(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let _ = writeln!(out, "{l}");
        }
        if !self.verdicts.is_empty() {
            if !self.lines.is_empty() {
                out.push('\n');
            }
            let w = self
                .verdicts
                .iter()
                .map(|v| v.axiom.len())
                .max()
                .unwrap_or(0);
            for v in &self.verdicts {
                let tag = if v.verdict { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{tag}  {:<w$}  checked {:>10}  {}",
                    v.axiom, v.checked, v.domain
                );
                if let Some(ce) = &v.counterexample {
                    let _ = writeln!(out, "      {}", ce.detail);
                    for s in &ce.sets {
                        let _ = writeln!(out, "      {} = {}", s.role, s.set);
                    }
                    if let Some(r) = &ce.scalar {
                        let _ = writeln!(out, "      r = {r}");
                    }
                    if let Some(x) = &ce.witness {
                        let _ = writeln!(out, "      witness {x}");
                    }
                }
            }
        }
        out
    }
}
