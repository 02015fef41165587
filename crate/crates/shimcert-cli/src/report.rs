//! Machine-readable run reports.
//!
//! Every command emits one JSON report carrying the command name, hashes
//! of its input files, the effective parameters and tolerances, the
//! verdict and witnesses, and the wall time. Reports are byte-identical
//! across reruns except for the wall-time field; exact verdicts record
//! "exact" instead of a tolerance.

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use shimcert::error::Error;

#[derive(Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputHash>,
    pub parameters: Value,
    pub tolerances: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub result: Value,
    pub wall_ms: f64,
}

pub struct ReportBuilder {
    command: String,
    inputs: Vec<InputHash>,
    parameters: Map<String, Value>,
    tolerances: Map<String, Value>,
    seed: Option<u64>,
    verdict: Option<String>,
    start: std::time::Instant,
}

impl ReportBuilder {
    pub fn new(command: &str) -> Self {
        ReportBuilder {
            command: command.to_string(),
            inputs: Vec::new(),
            parameters: Map::new(),
            tolerances: Map::new(),
            seed: None,
            verdict: None,
            start: std::time::Instant::now(),
        }
    }

    pub fn input(&mut self, path: &str, bytes: &[u8]) {
        let digest = Sha256::digest(bytes);
        let sha256 = digest
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect::<String>();
        self.inputs.push(InputHash {
            path: path.to_string(),
            sha256,
        });
    }

    pub fn parameter<V: Into<Value>>(&mut self, key: &str, value: V) {
        self.parameters.insert(key.to_string(), value.into());
    }

    /// Record a tolerance that decided part of the verdict.
    pub fn tolerance(&mut self, key: &str, value: f64) {
        self.tolerances.insert(key.to_string(), Value::from(value));
    }

    /// Record that a verdict was decided exactly, with no tolerance.
    pub fn exact(&mut self, key: &str) {
        self.tolerances
            .insert(key.to_string(), Value::from("exact"));
    }

    pub fn seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    pub fn verdict(&mut self, verdict: &str) {
        self.verdict = Some(verdict.to_string());
    }

    pub fn finish(self, result: Value) -> RunReport {
        RunReport {
            command: self.command,
            inputs: self.inputs,
            parameters: Value::Object(self.parameters),
            tolerances: Value::Object(self.tolerances),
            seed: self.seed,
            verdict: self.verdict,
            result,
            wall_ms: self.start.elapsed().as_secs_f64() * 1e3,
        }
    }
}

/// Process exit codes: 0 verdict-pass, 1 verdict-fail, 2 usage or
/// validation error, 3 numerical breakdown.
pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::DependentKernelFunctions { .. }
        | Error::IllConditionedSpan { .. }
        | Error::VanishingDenominator { .. }
        | Error::NonFinite => 3,
        _ => 2,
    }
}
