use std::path::PathBuf;

use thiserror::Error;

use crate::nat::Nat;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the syracuse crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("value must be positive")]
    Zero,

    #[error("{0} is even; an odd value is required")]
    NotOdd(Nat),

    #[error("k = 1 is terminal (f(1) = 1) and is excluded from case analysis")]
    TerminalSeed,

    #[error("expected a {expected} input, found {found}")]
    WrongCase {
        expected: &'static str,
        found: &'static str,
    },

    #[error("exponent n = {n} is outside 1..={} for p = {p}", p.saturating_sub(1))]
    ExponentOutOfRange { n: u32, p: u32 },

    #[error("exponent p = {p} is below the required minimum {min}")]
    ExponentTooSmall { p: u32, min: u32 },

    #[error("{numerator} is not divisible by {divisor}")]
    DivisibilityViolation { numerator: Nat, divisor: u32 },

    #[error("relation re-verification failed: {context}")]
    RelationViolation { context: String },

    #[error("identity 16k = 9r + 7 does not hold: {lhs} != {rhs}")]
    IdentityViolation { lhs: Nat, rhs: Nat },

    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),

    #[error("invalid range: lo = {lo} exceeds hi = {hi}")]
    InvalidRange { lo: Nat, hi: Nat },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot parse `{0}` as a non-negative integer")]
    ParseNat(String),

    #[error("checkpoint file not found: {0}")]
    CheckpointMissing(PathBuf),

    #[error("checkpoint file is corrupt: {0}")]
    CheckpointCorrupt(String),

    #[error(
        "checkpoint was written for a different configuration (hash {found}, expected {expected})"
    )]
    CheckpointConfigMismatch { expected: String, found: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::CheckpointCorrupt(e.to_string())
    }
}
