//! Exact Syracuse/Collatz dynamics.
//!
//! The crate is organized around the odd positive integers: the Collatz map
//! `g`, the Syracuse map `f` (the odd part of `3k+1`), the decomposition
//! `k = 2^p·h − 1`, and the six-way case analysis it induces. On top of
//! those sit constructive descent witnesses, a registry of falsifiable
//! claims with counterexample search, orbit statistics, and a parallel
//! bounded range verifier with checkpoint/resume.
//!
//! All arithmetic is exact at any magnitude: values ride a `u128` fast path
//! and escalate to big integers on overflow, never wrapping.

pub mod claims;
pub mod classify;
pub mod decompose;
pub mod descent;
pub mod error;
pub mod map;
pub mod nat;
mod serde_util;
pub mod trajectory;
pub mod verifier;

pub use serde_util::int_string as serde_int_string;

pub use claims::{check_claim, run_all, ClaimId, ClaimReport, Verdict};
pub use classify::{classify, classify_decomposition, CaseKind, CaseTag};
pub use decompose::{decompose, pow2_mod3, Decomposition};
pub use descent::{
    case1_witness, case2_predecessor, case34_identity_check, case34_m, case34_r, case34_witness,
    descend, expansion, peak_value, preimages, DescentOutcome, DescentWitness, Integrality,
    PeakValue, Preimage, PreimageSet,
};
pub use error::{Error, Result};
pub use map::{f_iterate, f_step, g_step, SyracuseStep};
pub use nat::{Nat, OddNat};
pub use trajectory::{in_e_bounded, orbit_stats, Membership, TrajectoryStats, DEFAULT_BUDGET};
pub use verifier::{
    checkpoint_read, checkpoint_write, records, verify_range, PeakRecord, RecordsReport,
    StoppingTimeRecord, VerifyCheckpoint, VerifyConfig, VerifyReport,
};
