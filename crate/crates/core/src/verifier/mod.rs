//! Bounded range verification: drive every odd integer in a range through
//! the Syracuse map until it reaches 1 or drops below an already-verified
//! frontier, in parallel, with deterministic reports, record tracking, and
//! checkpoint/resume.
//!
//! Work is split into disjoint chunks of odd seeds. Chunks run on a worker
//! pool and produce purely input-determined outcomes, which then merge in a
//! sequential reduction over ascending chunk order — so the final report is
//! byte-identical no matter how many workers ran or how the schedule
//! interleaved, and a resumed run reproduces an uninterrupted one exactly.

mod checkpoint;

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checkpoint::{
    checkpoint_read, checkpoint_write, CheckpointHeader, ChunkRecord, VerifyCheckpoint,
    SCHEMA_VERSION,
};

use crate::error::{Error, Result};
use crate::nat::{Nat, OddNat};
use crate::trajectory::DEFAULT_BUDGET;

/// Default number of odd integers per work unit: large enough to amortize
/// scheduling, small enough for responsive checkpoints.
pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;

/// Configuration of one verification run.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub lo: Nat,
    pub hi: Nat,
    /// Odd integers per work unit.
    pub chunk_size: u64,
    pub worker_count: usize,
    /// Per-seed cap in `f`-steps.
    pub budget: u64,
    pub checkpoint_path: Option<PathBuf>,
    /// When set, every odd integer below `lo` is taken as already verified,
    /// and orbits may stop as soon as they drop below `lo`. Runs can chain:
    /// each run's certificate grounds the next one's frontier.
    pub assume_below_lo_verified: bool,
}

impl VerifyConfig {
    pub fn new(lo: Nat, hi: Nat) -> Self {
        VerifyConfig {
            lo,
            hi,
            chunk_size: DEFAULT_CHUNK_SIZE,
            worker_count: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
            budget: DEFAULT_BUDGET,
            checkpoint_path: None,
            assume_below_lo_verified: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lo > self.hi {
            return Err(Error::InvalidRange {
                lo: self.lo.clone(),
                hi: self.hi.clone(),
            });
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidConfig("chunk_size must be at least 1".into()));
        }
        if self.worker_count == 0 {
            return Err(Error::InvalidConfig(
                "worker_count must be at least 1".into(),
            ));
        }
        if self.budget == 0 {
            return Err(Error::InvalidConfig("budget must be at least 1".into()));
        }
        // Without the assumption there is no external certificate, so the
        // frontier must be grounded at the bottom of the odd integers.
        if !self.assume_below_lo_verified && self.lo != Nat::from(3u64) {
            return Err(Error::InvalidConfig(
                "lo must be 3 unless --assume-verified-below grounds the shortcut".into(),
            ));
        }
        Ok(())
    }

    /// Hash of the semantically relevant configuration. Worker count and
    /// checkpoint location are execution machinery: reports do not depend
    /// on them, so resuming under a different pool size stays valid.
    pub fn content_hash(&self) -> String {
        let canonical = format!(
            "syracuse-verify-v{}|{}|{}|{}|{}|{}",
            SCHEMA_VERSION,
            self.lo,
            self.hi,
            self.chunk_size,
            self.budget,
            self.assume_below_lo_verified
        );
        format!("{:016x}", fnv1a64(canonical.as_bytes()))
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// A seed that set a new chunk-local maximum, with full-orbit statistics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordEntry {
    pub k: OddNat,
    #[serde(with = "crate::serde_util::int_string")]
    pub collatz_steps: u64,
    pub peak: Nat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoppingTimeRecord {
    pub k: OddNat,
    #[serde(with = "crate::serde_util::int_string")]
    pub collatz_steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakRecord {
    pub k: OddNat,
    pub peak: Nat,
}

/// Outcome of one verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub lo: Nat,
    pub hi: Nat,
    #[serde(with = "crate::serde_util::int_string")]
    pub chunk_size: u64,
    #[serde(with = "crate::serde_util::int_string")]
    pub budget: u64,
    pub assume_below_lo_verified: bool,
    pub config_hash: String,
    #[serde(with = "crate::serde_util::int_string")]
    pub verified_count: u64,
    /// Seeds whose orbit provably fails to reach 1. Expected empty; an entry
    /// here would be a counterexample to the conjecture itself.
    pub failures: Vec<OddNat>,
    pub budget_exceeded: Vec<OddNat>,
    /// Seeds setting a new maximum total stopping time, ascending in both
    /// components.
    pub stopping_time_records: Vec<StoppingTimeRecord>,
    /// Seeds setting a new maximum orbit peak, ascending in both components.
    pub peak_records: Vec<PeakRecord>,
}

/// Record lists over a range, computed with full orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordsReport {
    pub stopping_time_records: Vec<StoppingTimeRecord>,
    pub peak_records: Vec<PeakRecord>,
    pub budget_exceeded: Vec<OddNat>,
}

/// The odd integers of `[lo, hi]` as `first + 2i`, `i < count`.
struct OddRange {
    first: Nat,
    count: u64,
}

fn odd_range(lo: &Nat, hi: &Nat) -> Result<Option<OddRange>> {
    if lo > hi {
        return Err(Error::InvalidRange {
            lo: lo.clone(),
            hi: hi.clone(),
        });
    }
    let first = if lo.is_zero() {
        Nat::one()
    } else if lo.is_odd() {
        lo.clone()
    } else {
        lo.add_u64(1)
    };
    if &first > hi {
        return Ok(None);
    }
    let last = if hi.is_odd() {
        hi.clone()
    } else {
        hi.checked_sub_u64(1).expect("hi >= first >= 1")
    };
    let count = last
        .checked_sub(&first)
        .expect("last >= first")
        .shr(1)
        .add_u64(1)
        .to_u64()
        .ok_or_else(|| {
            Error::InvalidConfig("range holds more odd integers than can be scanned".into())
        })?;
    Ok(Some(OddRange { first, count }))
}

enum SeedOutcome {
    /// Reached 1; full-orbit statistics.
    Done {
        collatz_steps: u64,
        peak: Nat,
    },
    /// Dropped strictly below the threshold; statistics of the prefix.
    Dropped {
        value: Nat,
        collatz_steps: u64,
        peak: Nat,
    },
    Exhausted,
}

fn run_seed(seed: &Nat, threshold: Option<&Nat>, budget: u64) -> SeedOutcome {
    if let Some(s) = seed.to_u128() {
        // Seeds never start below the threshold, so a threshold that does
        // not fit u128 implies the seed does not either.
        let t = threshold.map(|t| t.to_u128().expect("threshold <= seed"));
        if let Some(outcome) = run_seed_u128(s, t, budget) {
            return outcome;
        }
    }
    // Overflow (or an oversized seed): retry entirely in big arithmetic.
    run_seed_big(seed, threshold, budget)
}

fn run_seed_u128(seed: u128, threshold: Option<u128>, budget: u64) -> Option<SeedOutcome> {
    let mut v = seed;
    let mut peak = seed;
    let mut collatz_steps = 0u64;
    let mut f_steps = 0u64;
    loop {
        if v == 1 {
            return Some(SeedOutcome::Done {
                collatz_steps,
                peak: Nat::from(peak),
            });
        }
        if let Some(t) = threshold {
            if v < t {
                return Some(SeedOutcome::Dropped {
                    value: Nat::from(v),
                    collatz_steps,
                    peak: Nat::from(peak),
                });
            }
        }
        if f_steps == budget {
            return Some(SeedOutcome::Exhausted);
        }
        let up = v.checked_mul(3)?.checked_add(1)?;
        if up > peak {
            peak = up;
        }
        let n = up.trailing_zeros();
        v = up >> n;
        f_steps += 1;
        collatz_steps += 1 + u64::from(n);
    }
}

fn run_seed_big(seed: &Nat, threshold: Option<&Nat>, budget: u64) -> SeedOutcome {
    let mut v = seed.to_biguint();
    let threshold = threshold.map(Nat::to_biguint);
    let one = BigUint::one();
    let mut peak = v.clone();
    let mut collatz_steps = 0u64;
    let mut f_steps = 0u64;
    loop {
        if v == one {
            return SeedOutcome::Done {
                collatz_steps,
                peak: Nat::from(peak),
            };
        }
        if let Some(t) = &threshold {
            if v < *t {
                return SeedOutcome::Dropped {
                    value: Nat::from(v),
                    collatz_steps,
                    peak: Nat::from(peak),
                };
            }
        }
        if f_steps == budget {
            return SeedOutcome::Exhausted;
        }
        let up = &v * 3u32 + 1u32;
        if up > peak {
            peak = up.clone();
        }
        let n = up.trailing_zeros().expect("3v+1 >= 4") as u32;
        v = up >> n;
        f_steps += 1;
        collatz_steps += 1 + u64::from(n);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct ChunkOutcome {
    verified: u64,
    budget_exceeded: Vec<OddNat>,
    local_records: Vec<RecordEntry>,
}

impl ChunkOutcome {
    fn clean(&self) -> bool {
        self.budget_exceeded.is_empty()
    }
}

/// Processes one chunk of odd seeds. Verification verdicts use the shortcut
/// threshold; record statistics are completed to full orbits by memoizing
/// the tails of below-threshold drop values.
fn process_chunk(
    range: &OddRange,
    chunk_size: u64,
    index: u64,
    threshold: Option<&Nat>,
    budget: u64,
) -> ChunkOutcome {
    let offset = index
        .checked_mul(chunk_size)
        .expect("chunk offset fits u64");
    let len = chunk_size.min(range.count - offset);
    let mut seed = range.first.add(&Nat::from(offset).shl(1));
    let mut out = ChunkOutcome::default();
    let mut tails: HashMap<Nat, Option<(u64, Nat)>> = HashMap::new();
    let mut best_steps: Option<u64> = None;
    let mut best_peak: Option<Nat> = None;

    let consider = |out: &mut ChunkOutcome,
                    best_steps: &mut Option<u64>,
                    best_peak: &mut Option<Nat>,
                    k: &Nat,
                    collatz_steps: u64,
                    peak: Nat| {
        let steps_record = best_steps.is_none_or(|b| collatz_steps > b);
        let peak_record = best_peak.as_ref().is_none_or(|b| peak > *b);
        if steps_record {
            *best_steps = Some(collatz_steps);
        }
        if peak_record {
            *best_peak = Some(peak.clone());
        }
        if steps_record || peak_record {
            out.local_records.push(RecordEntry {
                k: OddNat::new(k.clone()).expect("seeds are odd"),
                collatz_steps,
                peak,
            });
        }
    };

    for _ in 0..len {
        match run_seed(&seed, threshold, budget) {
            SeedOutcome::Exhausted => {
                out.budget_exceeded
                    .push(OddNat::new(seed.clone()).expect("seeds are odd"));
            }
            SeedOutcome::Done {
                collatz_steps,
                peak,
            } => {
                out.verified += 1;
                consider(
                    &mut out,
                    &mut best_steps,
                    &mut best_peak,
                    &seed,
                    collatz_steps,
                    peak,
                );
            }
            SeedOutcome::Dropped {
                value,
                collatz_steps,
                peak,
            } => {
                out.verified += 1;
                let tail =
                    tails
                        .entry(value)
                        .or_insert_with_key(|v| match run_seed(v, None, budget) {
                            SeedOutcome::Done {
                                collatz_steps,
                                peak,
                            } => Some((collatz_steps, peak)),
                            // The drop value itself blew the budget. The seed
                            // stays verified (it reached the assumed-verified
                            // frontier) but has no known full statistics, so it
                            // cannot take part in record detection. Unreachable
                            // unless the frontier assumption was false.
                            _ => None,
                        });
                if let Some((tail_steps, tail_peak)) = tail {
                    let full_steps = collatz_steps + *tail_steps;
                    let full_peak = if *tail_peak > peak {
                        tail_peak.clone()
                    } else {
                        peak
                    };
                    consider(
                        &mut out,
                        &mut best_steps,
                        &mut best_peak,
                        &seed,
                        full_steps,
                        full_peak,
                    );
                }
            }
        }
        seed = seed.add_u64(2);
    }
    out
}

fn reduce(
    outcomes: &BTreeMap<u64, ChunkOutcome>,
) -> (u64, Vec<OddNat>, Vec<StoppingTimeRecord>, Vec<PeakRecord>) {
    let mut verified = 0u64;
    let mut budget_exceeded = Vec::new();
    let mut stopping = Vec::new();
    let mut peaks = Vec::new();
    let mut best_steps: Option<u64> = None;
    let mut best_peak: Option<Nat> = None;
    for outcome in outcomes.values() {
        verified += outcome.verified;
        budget_exceeded.extend(outcome.budget_exceeded.iter().cloned());
        for entry in &outcome.local_records {
            if best_steps.is_none_or(|b| entry.collatz_steps > b) {
                stopping.push(StoppingTimeRecord {
                    k: entry.k.clone(),
                    collatz_steps: entry.collatz_steps,
                });
                best_steps = Some(entry.collatz_steps);
            }
            if best_peak.as_ref().is_none_or(|b| entry.peak > *b) {
                peaks.push(PeakRecord {
                    k: entry.k.clone(),
                    peak: entry.peak.clone(),
                });
                best_peak = Some(entry.peak.clone());
            }
        }
    }
    (verified, budget_exceeded, stopping, peaks)
}

/// Verifies every odd integer in `[config.lo, config.hi]`.
pub fn verify_range(config: &VerifyConfig) -> Result<VerifyReport> {
    config.validate()?;
    let range = odd_range(&config.lo, &config.hi)?;
    let config_hash = config.content_hash();

    let empty_report = |verified, budget_exceeded, stopping, peaks| VerifyReport {
        lo: config.lo.clone(),
        hi: config.hi.clone(),
        chunk_size: config.chunk_size,
        budget: config.budget,
        assume_below_lo_verified: config.assume_below_lo_verified,
        config_hash: config_hash.clone(),
        verified_count: verified,
        failures: Vec::new(),
        budget_exceeded,
        stopping_time_records: stopping,
        peak_records: peaks,
    };

    let Some(range) = range else {
        return Ok(empty_report(0, Vec::new(), Vec::new(), Vec::new()));
    };

    let chunk_count = range.count.div_ceil(config.chunk_size);
    let header = CheckpointHeader {
        schema_version: SCHEMA_VERSION,
        lo: config.lo.clone(),
        hi: config.hi.clone(),
        chunk_size: config.chunk_size,
        config_hash: config_hash.clone(),
    };

    let mut completed: BTreeMap<u64, ChunkOutcome> = BTreeMap::new();
    let appender = match &config.checkpoint_path {
        Some(path) => {
            let (appender, restored) =
                checkpoint::CheckpointAppender::open(path, &header, chunk_count)?;
            for (index, record) in restored {
                completed.insert(
                    index,
                    ChunkOutcome {
                        verified: record.verified_count,
                        budget_exceeded: Vec::new(),
                        local_records: record.local_records,
                    },
                );
            }
            Some(Mutex::new(appender))
        }
        None => None,
    };

    let pending: Vec<u64> = (0..chunk_count)
        .filter(|i| !completed.contains_key(i))
        .collect();
    let threshold = config.assume_below_lo_verified.then(|| config.lo.clone());

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.worker_count)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot build worker pool: {e}")))?;

    let computed: Vec<(u64, ChunkOutcome)> = pool.install(|| {
        pending
            .par_iter()
            .map(|&index| {
                let outcome = process_chunk(
                    &range,
                    config.chunk_size,
                    index,
                    threshold.as_ref(),
                    config.budget,
                );
                // Only clean chunks are checkpointed: the file schema has no
                // room for budget-exceeded seeds, so dirty chunks recompute
                // on resume.
                if outcome.clean() {
                    if let Some(appender) = &appender {
                        let record = ChunkRecord {
                            chunk_index: index,
                            verified_count: outcome.verified,
                            local_records: outcome.local_records.clone(),
                        };
                        appender
                            .lock()
                            .expect("checkpoint writer lock")
                            .write_line(&record)?;
                    }
                }
                Ok((index, outcome))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    completed.extend(computed);
    let (verified, budget_exceeded, stopping, peaks) = reduce(&completed);
    Ok(empty_report(verified, budget_exceeded, stopping, peaks))
}

/// Record-setters over `[lo, hi]`, computed with full orbits (no shortcut),
/// ties broken by the smaller seed.
pub fn records(lo: &Nat, hi: &Nat) -> Result<RecordsReport> {
    let Some(range) = odd_range(lo, hi)? else {
        return Ok(RecordsReport {
            stopping_time_records: Vec::new(),
            peak_records: Vec::new(),
            budget_exceeded: Vec::new(),
        });
    };
    let chunk_count = range.count.div_ceil(DEFAULT_CHUNK_SIZE);
    let outcomes: BTreeMap<u64, ChunkOutcome> = (0..chunk_count)
        .into_par_iter()
        .map(|index| {
            (
                index,
                process_chunk(&range, DEFAULT_CHUNK_SIZE, index, None, DEFAULT_BUDGET),
            )
        })
        .collect();
    let (_, budget_exceeded, stopping, peaks) = reduce(&outcomes);
    Ok(RecordsReport {
        stopping_time_records: stopping,
        peak_records: peaks,
        budget_exceeded,
    })
}
