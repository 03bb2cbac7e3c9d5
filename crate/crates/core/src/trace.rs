//! JSON documents describing runs. Everything except `timing` is a pure
//! function of the command line and the seed.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::mma::{Action, Trace};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub index: usize,
    /// Action number: "1" to "6", or "5'".
    pub action: String,
    pub name: String,
    pub position: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub binding: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub selection: Option<Vec<String>>,
    /// Equation set after the step.
    pub state: String,
}

impl StepRecord {
    pub fn new(index: usize, a: &Action, state: String) -> Self {
        StepRecord {
            index,
            action: a.kind.number().to_string(),
            name: a.kind.name().to_string(),
            position: a.position,
            binding: a.binding.as_ref().map(|(x, t)| format!("{x}/{t}")),
            selection: (!a.selection.is_empty()).then(|| a.selection.iter().map(ToString::to_string).collect()),
            state,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub seed: u64,
    pub initial: String,
    pub steps: Vec<StepRecord>,
    #[serde(rename = "final")]
    pub final_state: String,
    pub status: String,
    /// Command-specific payload (mgu, verdicts, counts).
    #[serde(default)]
    pub result: Value,
    pub timing: Timing,
}

impl TraceDocument {
    pub fn new(command: Vec<String>, seed: u64, initial: String, status: &str) -> Self {
        TraceDocument {
            schema_version: SCHEMA_VERSION,
            command,
            seed,
            final_state: initial.clone(),
            initial,
            steps: Vec::new(),
            status: status.to_string(),
            result: Value::Null,
            timing: Timing { elapsed_ms: 0.0 },
        }
    }

    pub fn from_trace(command: Vec<String>, seed: u64, t: &Trace) -> Self {
        let mut doc = TraceDocument::new(command, seed, format!("{{{}}}", t.initial), t.outcome.label());
        doc.steps = t
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| StepRecord::new(i + 1, &s.action, format!("{{{}}}", s.after)))
            .collect();
        doc.final_state = format!("{{{}}}", t.final_eqs());
        doc
    }

    pub fn with_result(mut self, result: Value) -> Self {
        self.result = result;
        self
    }

    pub fn with_elapsed(mut self, elapsed: std::time::Duration) -> Self {
        self.timing.elapsed_ms = elapsed.as_secs_f64() * 1000.0;
        self
    }

    /// The document with timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        TraceDocument {
            timing: Timing { elapsed_ms: 0.0 },
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mma::{run, StrategyKind};
    use crate::parser::parse_equations;

    #[test]
    fn round_trip() {
        let e = parse_equations("f(X, b) = f(a, Y)").unwrap();
        let t = run(&e, &mut StrategyKind::Leftmost.build(), 100);
        let doc = TraceDocument::from_trace(vec!["unify".into()], 0, &t);
        assert_eq!(doc.steps[0].action, "1");
        assert_eq!(doc.status, "solved");
        let back: TraceDocument = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        let v: Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert!(v.get("final").is_some());
    }
}
