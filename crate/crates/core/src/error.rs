use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// A single named rule failure reported by validation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub detail: String,
}

impl Violation {
    pub fn new(rule: &'static str, detail: impl Into<String>) -> Self {
        Self {
            rule,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.detail.is_empty() {
            f.write_str(self.rule)
        } else {
            write!(f, "{}: {}", self.rule, self.detail)
        }
    }
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("identity error: {0}")]
    Identity(String),

    #[error("attestation error: {0}")]
    Attestation(String),

    #[error("validation failed: {}", join(.0))]
    Validation(Vec<Violation>),

    #[error("invalid governance config: {}", join(.0))]
    Config(Vec<Violation>),

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("no live version of lineage {0} at the requested time")]
    NoLiveVersion(String),

    #[error("artifact {0} has no replications")]
    NoReplications(String),

    #[error("credential weights sum to zero")]
    DegenerateWeights,

    #[error("malformed ledger line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// Violations carried by validation or config errors, if any.
    pub fn violations(&self) -> &[Violation] {
        match self {
            Error::Validation(v) | Error::Config(v) => v,
            _ => &[],
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
