use std::path::PathBuf;

use flagperm::Error;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "FLAGPERM_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    /// Reported for context; never affects the aggregate.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict, detail: impl Serialize) -> Check {
        Check { name: name.into(), verdict, detail: serde_json::to_value(detail).unwrap_or(Value::Null) }
    }

    pub fn pass_if(name: impl Into<String>, ok: bool, detail: impl Serialize) -> Check {
        Check::new(name, if ok { Verdict::Pass } else { Verdict::Fail }, detail)
    }

    pub fn prefixed(mut self, prefix: &str) -> Check {
        self.name = format!("{prefix}.{}", self.name);
        self
    }
}

pub fn aggregate(checks: &[Check]) -> Verdict {
    if checks.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if checks.iter().any(|c| c.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

/// Every option that influences a run. Field names double as flag names, so
/// the reproduction line is rendered straight from this struct.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub type_label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gens: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl RunConfig {
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// Command line that reruns exactly this configuration.
    pub fn reproduce(&self) -> String {
        let mut line = format!("flagperm {}", self.command);
        if let Ok(Value::Object(map)) = serde_json::to_value(self) {
            for (k, v) in map {
                if k == "command" {
                    continue;
                }
                let v = match v {
                    Value::String(s) => s,
                    other => other.to_string(),
                };
                line.push_str(&format!(" --{k} {}", quote(&v)));
            }
        }
        line
    }
}

fn quote(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || ",.:_-/{}".contains(c)) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', "'\\''"))
    }
}

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|s| !s.is_empty()).map(PathBuf::from)
}

/// What a command hands back before it is wrapped in an [`Envelope`].
pub struct Outcome {
    pub checks: Vec<Check>,
    pub result: Value,
}

#[derive(Serialize)]
pub struct Envelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub config_hash: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub result: Value,
    pub reproduce: String,
}

#[derive(Serialize)]
pub struct ErrorEnvelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub config_hash: String,
    pub verdict: &'static str,
    pub kind: &'static str,
    pub message: String,
    pub reproduce: String,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

impl Envelope {
    pub fn new(config: RunConfig, outcome: Outcome) -> Envelope {
        Envelope {
            tool: "flagperm",
            version: VERSION,
            config_hash: config.hash(),
            verdict: aggregate(&outcome.checks),
            reproduce: config.reproduce(),
            config,
            checks: outcome.checks,
            result: outcome.result,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass | Verdict::Info => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

impl ErrorEnvelope {
    pub fn new(config: RunConfig, err: &Error) -> ErrorEnvelope {
        let kind = match err {
            Error::Resource { .. } => "resource",
            Error::Config(_) | Error::Parse(_) => "usage",
            Error::Unsupported(_) => "unsupported",
            Error::Domain(_) | Error::Precondition(_) => "invalid-input",
        };
        ErrorEnvelope {
            tool: "flagperm",
            version: VERSION,
            config_hash: config.hash(),
            verdict: "error",
            kind,
            message: err.to_string(),
            reproduce: config.reproduce(),
            config,
        }
    }
}
