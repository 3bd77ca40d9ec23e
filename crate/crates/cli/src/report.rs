//! Reports as canonical JSON: keys sorted, runtime data kept apart from the
//! deterministic payload.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::config::JobConfig;

pub const TOOL: &str = "facering";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How a verdict maps onto the process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Affirmative,
    Refuted,
    Inconclusive,
    Error,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Affirmative => 0,
            Outcome::Refuted => 1,
            Outcome::Inconclusive => 2,
            Outcome::Error => 3,
        }
    }

    /// The weaker of two outcomes, for commands made of several checks.
    pub fn combine(self, other: Outcome) -> Outcome {
        self.max(other)
    }

    fn rank(self) -> u8 {
        match self {
            Outcome::Affirmative => 0,
            Outcome::Inconclusive => 1,
            Outcome::Refuted => 2,
            Outcome::Error => 3,
        }
    }

    fn max(self, other: Outcome) -> Outcome {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageRecord {
    pub name: String,
    pub outcome: Outcome,
    pub result: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Runtime {
    pub timings_ms: BTreeMap<String, f64>,
    pub cache: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: Value,
    pub input: Option<Value>,
    pub stages: Vec<StageRecord>,
    pub certificates: Vec<Value>,
    pub verdict: String,
    pub outcome: Outcome,
    pub exit_code: i32,
    pub error: Option<String>,
    pub runtime: Runtime,
}

impl Report {
    pub fn new(config: &JobConfig) -> Self {
        Report {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            config: serde_json::to_value(config).expect("config serializes"),
            input: None,
            stages: Vec::new(),
            certificates: Vec::new(),
            verdict: String::new(),
            outcome: Outcome::Affirmative,
            exit_code: 0,
            error: None,
            runtime: Runtime::default(),
        }
    }

    pub fn stage(&mut self, name: impl Into<String>, outcome: Outcome, result: Value) {
        self.stages.push(StageRecord {
            name: name.into(),
            outcome,
            result,
        });
    }

    pub fn time(&mut self, name: &str, start: Instant) {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        *self.runtime.timings_ms.entry(name.to_string()).or_insert(0.0) += ms;
    }

    pub fn finish(&mut self, verdict: impl Into<String>, outcome: Outcome) {
        self.verdict = verdict.into();
        self.outcome = outcome;
        self.exit_code = outcome.exit_code();
    }

    pub fn fail(&mut self, message: String) {
        self.error = Some(message);
        self.finish("error", Outcome::Error);
    }

    /// Everything except runtime data; identical for identical jobs.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.remove("runtime");
        }
        v
    }

    pub fn to_json(&self, with_runtime: bool) -> String {
        let v = if with_runtime {
            serde_json::to_value(self).expect("report serializes")
        } else {
            self.payload()
        };
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Command;

    #[test]
    fn keys_are_sorted_and_runtime_is_separate() {
        let mut r = Report::new(&JobConfig::new(Command::Homology));
        r.stage("b", Outcome::Affirmative, serde_json::json!({"z": 1, "a": 2}));
        r.runtime.cache = Some("miss".into());
        r.finish("done", Outcome::Inconclusive);
        let s = r.to_json(false);
        assert!(s.find("\"a\"").unwrap() < s.find("\"z\"").unwrap());
        assert!(s.find("\"certificates\"").unwrap() < s.find("\"verdict\"").unwrap());
        assert!(!s.contains("runtime"));
        assert!(r.to_json(true).contains("runtime"));
        assert_eq!(r.exit_code, 2);
    }

    #[test]
    fn combine_keeps_the_weakest() {
        use Outcome::*;
        assert_eq!(Affirmative.combine(Inconclusive), Inconclusive);
        assert_eq!(Refuted.combine(Inconclusive), Refuted);
        assert_eq!(Affirmative.combine(Affirmative), Affirmative);
    }
}
