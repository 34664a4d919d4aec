use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use semigraphoid::sweep::SweepOutcome;

use crate::cli::Format;

/// Outcome of a `verify` run. Contains no timing, so identical inputs and
/// seeds give identical reports.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub inputs: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_dominants: Option<usize>,
    pub traces_replayed: usize,
    pub failure_details: Vec<String>,
}

impl RunReport {
    pub fn from_sweep(parameters: BTreeMap<String, String>, outcome: SweepOutcome) -> Self {
        RunReport {
            command: format!("verify {}", outcome.suite),
            parameters,
            inputs: outcome.checked,
            failures: outcome.violations.len(),
            max_dominants: outcome.max_dominants,
            traces_replayed: outcome.traces_replayed,
            failure_details: outcome.violations,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Kv => self.render_kv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(out, "{} ({})", self.command, params.join(" "));
        let _ = writeln!(out, "  checked:    {}", self.inputs);
        let _ = writeln!(out, "  violations: {}", self.failures);
        if let Some(d) = self.max_dominants {
            let _ = writeln!(out, "  max dominant count: {d}");
        }
        if self.traces_replayed > 0 {
            let _ = writeln!(out, "  traces replayed: {}", self.traces_replayed);
        }
        for f in &self.failure_details {
            let _ = writeln!(out, "  FAIL {f}");
        }
        let _ = writeln!(out, "{}", if self.failures == 0 { "PASS" } else { "FAIL" });
        out
    }

    fn render_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command={}", self.command);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "param.{k}={v}");
        }
        let _ = writeln!(out, "inputs={}", self.inputs);
        let _ = writeln!(out, "failures={}", self.failures);
        if let Some(d) = self.max_dominants {
            let _ = writeln!(out, "max_dominants={d}");
        }
        let _ = writeln!(out, "traces_replayed={}", self.traces_replayed);
        for (i, f) in self.failure_details.iter().enumerate() {
            let _ = writeln!(out, "failure.{}={f}", i + 1);
        }
        let _ = writeln!(
            out,
            "status={}",
            if self.failures == 0 { "pass" } else { "fail" }
        );
        out
    }
}
