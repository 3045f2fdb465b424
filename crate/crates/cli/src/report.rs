//! Canonical report envelope.
//!
//! `serde_json::Value` keeps object keys in a `BTreeMap`, so serialising
//! through it yields sorted keys and stable bytes for identical runs.

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Pass,
    Fail,
    Indeterminate,
    Exploratory,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Indeterminate => "INDETERMINATE",
            Outcome::Exploratory => "EXPLORATORY",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Fail => 1,
            _ => 0,
        }
    }
}

pub struct Report {
    pub command: &'static str,
    /// Normalised inputs; hashed into `inputs_digest`.
    pub inputs: Value,
    pub outcome: Outcome,
    pub payload: Value,
    pub seed: Option<u64>,
    /// Overrides the outcome-derived exit code when set.
    pub exit: Option<i32>,
}

pub fn digest(inputs: &Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("values serialise");
    hex::encode(Sha256::digest(&bytes))
}

impl Report {
    pub fn to_canonical_json(&self) -> String {
        let mut v = json!({
            "command": self.command,
            "inputs_digest": digest(&json!({ "command": self.command, "inputs": self.inputs })),
            "outcome": self.outcome,
            "payload": self.payload,
        });
        if let Some(seed) = self.seed {
            v["seed"] = json!(seed);
        }
        // Round-trip through Value so nested structs also get sorted keys.
        serde_json::to_string(&v).expect("values serialise")
    }

    pub fn exit_code(&self) -> i32 {
        self.exit.unwrap_or_else(|| self.outcome.exit_code())
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialise")
}
