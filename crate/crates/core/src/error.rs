use std::fmt;

use crate::kernel::{Family, Violation};

/// Position of a problem inside a structure file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Position, message: String },

    #[error("{pos}: unknown event `{name}`")]
    UnknownEventAt { pos: Position, name: String },

    #[error("{pos}: `{clause}` clauses are not allowed in a {family} structure")]
    ClauseNotAllowed {
        pos: Position,
        clause: String,
        family: Family,
    },

    #[error("{}invalid structure: {}", .line.map(|l| format!("{l}:1: ")).unwrap_or_default(), join(.violations))]
    Invalid {
        line: Option<usize>,
        violations: Vec<Violation>,
    },

    #[error("unknown event `{0}`")]
    UnknownEvent(String),

    #[error("invalid event name `{0}`")]
    InvalidEventName(String),

    #[error("event `{0}` declared twice")]
    DuplicateEvent(String),

    #[error("alphabet has {0} events; at most 64 are supported")]
    AlphabetTooLarge(usize),

    #[error("{op} is not defined for {family} structures")]
    Unsupported { op: &'static str, family: Family },

    #[error("the structures have different event alphabets")]
    AlphabetMismatch,

    #[error("the causal-state closed form needs a single-state DCES (no cause is both added and dropped)")]
    NotSingleState,

    #[error("precedence posets of a DCES need an EBDC")]
    NotEbdc,

    #[error("configuration {0} is not reachable")]
    Unreachable(String),

    #[error("{0} has more than {1} events; refusing to materialize the enabling relation")]
    TooLarge(String, usize),

    #[error("search space of {0} does not fit the enumerator")]
    SearchSpace(String),

    #[error("no translation from {from} to {to}")]
    NoTranslation { from: Family, to: Family },

    #[error("transition relation violates the premise of the RCES translation: {0}")]
    Premise(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("unknown claim `{0}`")]
    UnknownClaim(String),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn join(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
