//! Conditional finite-state dimension of a bit sequence relative to an oracle.
//!
//! Five characterizations of `dim(α|β)` and `Dim(α|β)` are evaluated at a
//! finite horizon and cross-checked against each other:
//!
//! - empirical conditional block entropy ([`blockstat`]),
//! - finite-state gamblers with oracle look-ahead ([`gambler`]),
//! - automatic description modes and prefix-code families ([`autocomplexity`]),
//! - finite-state a priori complexity of conditional processes ([`apriori`]),
//! - the superadditive-measure view, carried by the property checks on the
//!   two concrete complexity measures above.
//!
//! [`report`] runs everything on one sequence pair and emits a deterministic
//! JSON (or CSV) report. All limit values are approximated by min/max over a
//! burn-in window and are labelled as finite-horizon estimates.

#![forbid(unsafe_code)]

pub mod apriori;
pub mod autocomplexity;
pub mod automaton;
pub mod bitseq;
pub mod blockstat;
pub mod checks;
pub mod gambler;
pub mod ratio;
pub mod report;

use thiserror::Error;

pub use bitseq::BitString;

/// Errors shared by all estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sequence spec: {0}")]
    InvalidSpec(String),

    #[error("illegal character {found:?} at byte offset {offset}")]
    IllegalChar { offset: usize, found: char },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("insufficient input length: need {needed} bits, have {available}")]
    InsufficientLength { needed: usize, available: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("missing transition: state {state}, window {window}{}", bit.map(|b| format!(", bit {b}")).unwrap_or_default())]
    MissingTransition {
        state: String,
        window: String,
        bit: Option<u8>,
    },

    #[error("stake out of range: state {state}, window {window}, q = {stake}")]
    StakeOutOfRange {
        state: String,
        window: String,
        stake: String,
    },

    #[error("lookahead mismatch: expected {expected}, found {found}")]
    LookaheadMismatch { expected: usize, found: usize },

    #[error("state space cap exceeded: more than {cap} states")]
    StateCapExceeded { cap: usize },

    #[error("valence exceeded: declared {declared}, observed {observed} for B={b}, P={p}; A-set {{{}}}", a_set.join(", "))]
    ValenceExceeded {
        declared: usize,
        observed: usize,
        b: String,
        p: String,
        a_set: Vec<String>,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid process: {0}")]
    InvalidProcess(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
