use serde::Serialize;

use super::{Direction, Law, Path};
use crate::syntax::Expr;

#[derive(Clone, Debug, PartialEq)]
pub struct ProofStep {
    pub law: Law,
    pub path: Path,
    pub direction: Direction,
    /// The definition unfolded by [`Law::DeltaUnfold`].
    pub unfolded: Option<String>,
    /// The whole expression after this step.
    pub result: Expr,
}

impl ProofStep {
    /// `β⤳`, `left`, `def. not`, ...
    pub fn label(&self) -> String {
        match &self.unfolded {
            Some(name) => format!("{} {name}", self.law.label()),
            None => self.law.label().to_string(),
        }
    }
}

/// A chain of rewrites from `start` to `end`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofTrace {
    pub start: Expr,
    pub steps: Vec<ProofStep>,
    pub end: Expr,
    /// Fuel ran out before a normal form was reached.
    pub exhausted: bool,
}

#[derive(Serialize)]
struct StepJson {
    law: &'static str,
    label: String,
    path: Path,
    direction: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    unfolded: Option<String>,
    result: String,
}

#[derive(Serialize)]
pub(crate) struct TraceJson {
    start: String,
    steps: Vec<StepJson>,
    end: String,
    exhausted: bool,
}

pub(crate) fn show_path(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join("."))
}

impl ProofTrace {
    pub fn laws(&self) -> Vec<Law> {
        self.steps.iter().map(|s| s.law).collect()
    }

    /// One expression per line, each step annotated `=(law)` in between.
    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.start);
        for s in &self.steps {
            out.push_str(&format!("  =({})\n{}\n", s.label(), s.result));
        }
        if self.exhausted {
            out.push_str("  -- fuel exhausted\n");
        }
        out
    }

    pub(crate) fn json(&self) -> TraceJson {
        TraceJson {
            start: self.start.to_string(),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    law: s.law.name(),
                    label: s.label(),
                    path: s.path.clone(),
                    direction: s.direction.to_string(),
                    unfolded: s.unfolded.clone(),
                    result: s.result.to_string(),
                })
                .collect(),
            end: self.end.to_string(),
            exhausted: self.exhausted,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.json()).expect("trace serializes")
    }
}
