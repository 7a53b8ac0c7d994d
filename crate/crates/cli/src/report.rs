//! The machine-readable report every command prints.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Positive verdict, or plain output.
    Ok,
    /// Negative verdict; the certificate is in `verdicts`.
    Negative,
    /// A search ran out of budget without deciding.
    Unknown,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::Unknown | Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub source: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(source: impl Into<String>, bytes: &[u8]) -> Self {
        InputDigest {
            source: source.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Field order is part of the output format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub backend: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Value>,
    pub inputs: Vec<InputDigest>,
    pub status: Status,
    /// Why the status is `unknown` or `error`: `undecided`, `parse`,
    /// `guard`, `budget`, `precondition` or `internal`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub verdicts: Map<String, Value>,
    /// The document the command analyzed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<Value>,
    /// A document for the next command in a pipe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifact: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn looks_like(v: &Value) -> bool {
        v.get("command").is_some() && v.get("verdicts").is_some() && v.get("status").is_some()
    }
}

impl Report {
    /// Short human-readable rendering; certificates are only summarized.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} [{} backend, seed {}]: {}",
            self.command,
            self.backend,
            self.seed,
            status_word(self.status)
        );
        if let Some(d) = &self.detail {
            out += &format!(" ({d})");
        }
        out.push('\n');
        if let Some(m) = &self.message {
            out += &format!("  {m}\n");
        }
        for (k, v) in &self.verdicts {
            let shown = match v {
                Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => v.to_string(),
                Value::Array(xs) => format!("{} items", xs.len()),
                Value::Object(_) => "certificate (see JSON output)".into(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out += &format!("  {k}: {shown}\n");
        }
        if let Some(t) = self.timing_ms {
            out += &format!("  time: {t} ms\n");
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Negative => "negative",
        Status::Unknown => "unknown",
        Status::Error => "error",
    }
}
