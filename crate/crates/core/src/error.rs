use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One failed check while validating a scenario config.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Dotted path of the offending field, e.g. `loads[2]`.
    pub field: String,
    pub message: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("negative arrival rate {0}")]
    NegativeRate(f64),

    #[error("degenerate time window [{start}, {end})")]
    EmptyWindow { start: f64, end: f64 },

    #[error("transmit probability {p} for node {node} is outside [0, 1]")]
    InvalidProbability { node: usize, p: f64 },

    #[error("expected {expected} per-node values, got {actual}")]
    NodeCountMismatch { expected: usize, actual: usize },

    #[error("negative load {0} passed to the throughput model")]
    NegativeLoad(f64),

    #[error("invalid topology: {0}")]
    Topology(String),

    #[error("invalid search interval [{lo}, {hi}]")]
    SearchInterval { lo: f64, hi: f64 },

    #[error("malformed config: {0}")]
    Parse(String),

    #[error("invalid config: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("invalid grid spec `{spec}`: {reason}")]
    Grid { spec: String, reason: String },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    /// Short machine-readable category used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NegativeRate(_)
            | Error::EmptyWindow { .. }
            | Error::InvalidProbability { .. }
            | Error::NodeCountMismatch { .. }
            | Error::NegativeLoad(_)
            | Error::Topology(_)
            | Error::SearchInterval { .. } => "domain",
            Error::Parse(_) => "parse",
            Error::Invalid(_) => "config",
            Error::Grid { .. } => "grid",
            Error::Io { .. } | Error::Csv { .. } => "io",
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
