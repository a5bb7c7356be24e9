//! A registry of falsifiable claims about the case analysis, each encoded as
//! an executable predicate over a range and searched for its smallest
//! counterexample with exact arithmetic.
//!
//! Some claims hold on every range (the descent constructions, the modular
//! correlation, the `16k = 9r + 7` identity); others fail, and the registry's
//! job is to report exactly where. In particular `r = (4m−1)/3` is only an
//! integer when `k ≡ 1 (mod 9)`, and whenever `r` is an integer it satisfies
//! `r > k` for every `k > 1`, so the `r < k` claims fail at their first
//! evaluable seed.
//!
//! Ranges may be partitioned across worker threads; per-chunk tallies merge
//! in range order, so reports are identical regardless of thread count.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_decomposition, CaseKind};
use crate::decompose::{decompose, pow2_mod3, Decomposition};
use crate::descent::{
    case34_identity_check, case34_m, case34_r, expansion, preimages, Integrality,
};
use crate::error::{Error, Result};
use crate::map::{f_iterate, f_step};
use crate::nat::{Nat, OddNat};

/// Counterexamples collected per report unless the caller asks otherwise.
pub const DEFAULT_COUNTEREXAMPLE_LIMIT: usize = 10;

/// Odd seeds (or exponents) per parallel work unit.
const SCAN_CHUNK: u64 = 1 << 15;

/// Valuation bound for the no-preimage scan.
const PREIMAGE_SCAN_BOUND: u32 = 64;

/// Identifier of one registered claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClaimId {
    /// `2^p ≡ 1 (mod 3)` for even `p`.
    L1A,
    /// `2^p ≡ 2 (mod 3)` for odd `p`.
    L1B,
    /// Case 1: `f(k) < k`.
    C1Descent,
    /// Case 2: `k̄ = 2^{p+1}·h̄ − 1` satisfies `f(k̄) = k` and `k̄ < k`.
    C2Descent,
    /// Cases 3/4: `m = (4k−1)/3` is an odd integer with `f(m) = k` at
    /// valuation 2.
    C34MIntegral,
    /// Case 3: `r = (4m−1)/3` is an integer.
    C3RIntegral,
    /// Case 4: `r = (4m−1)/3` is an integer.
    C4RIntegral,
    /// Case 3, where `r` is integral: `r < k`.
    C3RLessK,
    /// Case 4, where `r` is integral: `r < k`.
    C4RLessK,
    /// Cases 5/6: no odd `m` with `f(m) = k` exists.
    C56NoPreimage,
    /// Cases 5/6: `f^n(k) = 3^n·2^{p−n}·h − 1` for `n = 1..p−1`, strictly
    /// increasing.
    Expansion,
    /// For `p ≥ 2`: case 2 ⟺ `k ≡ 2`, cases 3/4 ⟺ `k ≡ 1`,
    /// cases 5/6 ⟺ `k ≡ 0 (mod 3)`.
    Mod3Correlation,
    /// Where `r` is integral: `16k = 9r + 7` exactly, and `f²(r) = k`.
    Identity16K,
}

impl ClaimId {
    pub const ALL: [ClaimId; 13] = [
        ClaimId::L1A,
        ClaimId::L1B,
        ClaimId::C1Descent,
        ClaimId::C2Descent,
        ClaimId::C34MIntegral,
        ClaimId::C3RIntegral,
        ClaimId::C4RIntegral,
        ClaimId::C3RLessK,
        ClaimId::C4RLessK,
        ClaimId::C56NoPreimage,
        ClaimId::Expansion,
        ClaimId::Mod3Correlation,
        ClaimId::Identity16K,
    ];

    pub fn identifier(self) -> &'static str {
        match self {
            ClaimId::L1A => "L1A",
            ClaimId::L1B => "L1B",
            ClaimId::C1Descent => "C1_DESCENT",
            ClaimId::C2Descent => "C2_DESCENT",
            ClaimId::C34MIntegral => "C34_M_INTEGRAL",
            ClaimId::C3RIntegral => "C3_R_INTEGRAL",
            ClaimId::C4RIntegral => "C4_R_INTEGRAL",
            ClaimId::C3RLessK => "C3_R_LESS_K",
            ClaimId::C4RLessK => "C4_R_LESS_K",
            ClaimId::C56NoPreimage => "C56_NO_PREIMAGE",
            ClaimId::Expansion => "EXPANSION",
            ClaimId::Mod3Correlation => "MOD3_CORRELATION",
            ClaimId::Identity16K => "IDENTITY_16K",
        }
    }

    /// Human-readable statement of the predicate and its precondition.
    pub fn description(self) -> &'static str {
        match self {
            ClaimId::L1A => "even exponents p: 2^p = 1 (mod 3)",
            ClaimId::L1B => "odd exponents p: 2^p = 2 (mod 3)",
            ClaimId::C1Descent => "Case1 k: f(k) < k",
            ClaimId::C2Descent => "Case2 k: kbar = 2^(p+1)*hbar - 1 has f(kbar) = k and kbar < k",
            ClaimId::C34MIntegral => {
                "Case3/Case4 k: m = (4k-1)/3 is an odd integer with f(m) = k at valuation 2"
            }
            ClaimId::C3RIntegral => "Case3 k: r = (4m-1)/3 is an integer",
            ClaimId::C4RIntegral => "Case4 k: r = (4m-1)/3 is an integer",
            ClaimId::C3RLessK => "Case3 k with integral r: r < k",
            ClaimId::C4RLessK => "Case4 k with integral r: r < k",
            ClaimId::C56NoPreimage => "Case5/Case6 k: no odd m has f(m) = k",
            ClaimId::Expansion => {
                "Case5/Case6 k: f^n(k) = 3^n*2^(p-n)*h - 1 for n = 1..p-1, strictly increasing"
            }
            ClaimId::Mod3Correlation => {
                "p >= 2 seeds: case 2 iff k = 2, cases 3/4 iff k = 1, cases 5/6 iff k = 0 (mod 3)"
            }
            ClaimId::Identity16K => "Case3/Case4 k with integral r: 16k = 9r + 7 and f^2(r) = k",
        }
    }

    /// L1A and L1B range over exponents; everything else over odd seeds.
    pub fn scans_exponents(self) -> bool {
        matches!(self, ClaimId::L1A | ClaimId::L1B)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.identifier())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .iter()
            .copied()
            .find(|c| c.identifier() == s)
            .ok_or_else(|| Error::UnknownClaim(s.to_owned()))
    }
}

impl Serialize for ClaimId {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.identifier())
    }
}

impl<'de> Deserialize<'de> for ClaimId {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "HOLDS_ON_RANGE")]
    HoldsOnRange,
    #[serde(rename = "FAILS")]
    Fails,
    /// Nothing in the range satisfied the claim's precondition.
    #[serde(rename = "VACUOUS")]
    Vacuous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HoldsOnRange => "HOLDS_ON_RANGE",
            Verdict::Fails => "FAILS",
            Verdict::Vacuous => "VACUOUS",
        })
    }
}

/// Result of scanning one claim over one range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: ClaimId,
    pub lo: Nat,
    pub hi: Nat,
    /// The case filter / precondition that was applied.
    pub filter: String,
    /// Elements that satisfied the precondition and were evaluated.
    #[serde(with = "crate::serde_util::int_string")]
    pub checked_count: u64,
    /// Elements matching the case filter whose antecedent failed (e.g. the
    /// `r < k` claims skip seeds with non-integral `r`). Counted separately
    /// so conditional claims cannot pass vacuously unnoticed.
    #[serde(with = "crate::serde_util::int_string")]
    pub skipped_count: u64,
    /// Ascending, capped at the requested limit.
    pub counterexamples: Vec<Nat>,
    pub smallest: Option<Nat>,
    pub verdict: Verdict,
}

enum Eval {
    Pass,
    Fail,
    /// Case filter matched but the claim's antecedent did not.
    Skip,
    /// Outside the claim's precondition entirely.
    NotApplicable,
}

fn eval_seed(claim: ClaimId, k: &OddNat) -> Eval {
    let d = decompose(k);
    let tag = match classify_decomposition(&d) {
        Ok(tag) => tag,
        Err(_) => return Eval::NotApplicable, // k = 1
    };
    let kind = tag.kind();
    match claim {
        ClaimId::L1A | ClaimId::L1B => unreachable!("exponent claims scan exponents"),
        ClaimId::C1Descent => {
            if kind != CaseKind::Case1 {
                return Eval::NotApplicable;
            }
            pass_if(f_step(k).next < *k)
        }
        ClaimId::C2Descent => {
            let Some(hbar) = tag.hbar() else {
                return Eval::NotApplicable;
            };
            let kbar_nat = hbar
                .get()
                .shl(d.p() + 1)
                .checked_sub_u64(1)
                .expect("2^{p+1}·hbar >= 2");
            let kbar = OddNat::new(kbar_nat).expect("2^{p+1}·hbar - 1 is odd");
            let step = f_step(&kbar);
            pass_if(step.next == *k && kbar < *k)
        }
        ClaimId::C34MIntegral => {
            if !matches!(kind, CaseKind::Case3 | CaseKind::Case4) {
                return Eval::NotApplicable;
            }
            pass_if(case34_m(k).is_ok())
        }
        ClaimId::C3RIntegral | ClaimId::C4RIntegral => {
            let wanted = if claim == ClaimId::C3RIntegral {
                CaseKind::Case3
            } else {
                CaseKind::Case4
            };
            if kind != wanted {
                return Eval::NotApplicable;
            }
            match case34_m(k).map(|m| case34_r(&m)) {
                Ok(Ok(Integrality::Integral(_))) => Eval::Pass,
                Ok(Ok(Integrality::NonIntegral { .. })) => Eval::Fail,
                _ => Eval::Fail,
            }
        }
        ClaimId::C3RLessK | ClaimId::C4RLessK => {
            let wanted = if claim == ClaimId::C3RLessK {
                CaseKind::Case3
            } else {
                CaseKind::Case4
            };
            if kind != wanted {
                return Eval::NotApplicable;
            }
            match case34_m(k).map(|m| case34_r(&m)) {
                Ok(Ok(Integrality::Integral(r))) => pass_if(r < *k),
                Ok(Ok(Integrality::NonIntegral { .. })) => Eval::Skip,
                _ => Eval::Fail,
            }
        }
        ClaimId::C56NoPreimage => {
            if !matches!(kind, CaseKind::Case5 | CaseKind::Case6) {
                return Eval::NotApplicable;
            }
            match preimages(k, PREIMAGE_SCAN_BOUND) {
                Ok(set) => pass_if(set.members.is_empty() && k.get().mod3() == 0),
                Err(_) => Eval::Fail,
            }
        }
        ClaimId::Expansion => {
            if !matches!(kind, CaseKind::Case5 | CaseKind::Case6) {
                return Eval::NotApplicable;
            }
            eval_expansion_chain(&d)
        }
        ClaimId::Mod3Correlation => {
            if d.p() < 2 {
                return Eval::NotApplicable;
            }
            let residue = k.get().mod3();
            pass_if(match kind {
                CaseKind::Case1 => false,
                CaseKind::Case2 => residue == 2,
                CaseKind::Case3 | CaseKind::Case4 => residue == 1,
                CaseKind::Case5 | CaseKind::Case6 => residue == 0,
            })
        }
        ClaimId::Identity16K => {
            if !matches!(kind, CaseKind::Case3 | CaseKind::Case4) {
                return Eval::NotApplicable;
            }
            match case34_m(k).map(|m| case34_r(&m)) {
                Ok(Ok(Integrality::Integral(r))) => {
                    let identity = case34_identity_check(k, &r);
                    pass_if(identity.is_ok() && f_iterate(&r, 2) == *k)
                }
                Ok(Ok(Integrality::NonIntegral { .. })) => Eval::Skip,
                _ => Eval::Fail,
            }
        }
    }
}

fn eval_expansion_chain(d: &Decomposition) -> Eval {
    let mut previous = d.k().clone();
    for n in 1..d.p() {
        match expansion(d, n) {
            Ok(value) => {
                if value <= previous {
                    return Eval::Fail;
                }
                previous = value;
            }
            Err(_) => return Eval::Fail,
        }
    }
    Eval::Pass
}

fn eval_exponent(claim: ClaimId, p: u64) -> Eval {
    let expected: u8 = match claim {
        ClaimId::L1A => {
            if p % 2 != 0 {
                return Eval::NotApplicable;
            }
            1
        }
        ClaimId::L1B => {
            if p % 2 != 1 {
                return Eval::NotApplicable;
            }
            2
        }
        _ => unreachable!("seed claims scan seeds"),
    };
    // The exact route: build 2^p as a big integer and reduce mod 3. The
    // parity shortcut must agree with it.
    let exact = (BigUint::one() << p) % 3u32;
    pass_if(exact == BigUint::from(expected) && pow2_mod3(p) == expected)
}

fn pass_if(condition: bool) -> Eval {
    if condition {
        Eval::Pass
    } else {
        Eval::Fail
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    skipped: u64,
    counterexamples: Vec<Nat>,
}

impl Tally {
    fn absorb(&mut self, value: Nat, eval: Eval, limit: usize) {
        match eval {
            Eval::Pass => self.checked += 1,
            Eval::Fail => {
                self.checked += 1;
                if self.counterexamples.len() < limit {
                    self.counterexamples.push(value);
                }
            }
            Eval::Skip => self.skipped += 1,
            Eval::NotApplicable => {}
        }
    }
}

/// Scans `claim` over `[lo, hi]`, collecting up to `limit` counterexamples
/// in ascending order.
///
/// Seed claims visit every odd integer in the range; L1A/L1B visit every
/// exponent of the right parity.
pub fn check_claim(claim: ClaimId, lo: &Nat, hi: &Nat, limit: usize) -> Result<ClaimReport> {
    if lo > hi {
        return Err(Error::InvalidRange {
            lo: lo.clone(),
            hi: hi.clone(),
        });
    }
    if limit == 0 {
        return Err(Error::InvalidConfig(
            "counterexample limit must be at least 1".into(),
        ));
    }

    let tally = if claim.scans_exponents() {
        scan_exponents(claim, lo, hi, limit)?
    } else {
        scan_seeds(claim, lo, hi, limit)?
    };

    let verdict = if tally.checked == 0 {
        Verdict::Vacuous
    } else if tally.counterexamples.is_empty() {
        Verdict::HoldsOnRange
    } else {
        Verdict::Fails
    };
    Ok(ClaimReport {
        claim,
        lo: lo.clone(),
        hi: hi.clone(),
        filter: claim.description().to_owned(),
        checked_count: tally.checked,
        skipped_count: tally.skipped,
        smallest: tally.counterexamples.first().cloned(),
        counterexamples: tally.counterexamples,
        verdict,
    })
}

fn scan_seeds(claim: ClaimId, lo: &Nat, hi: &Nat, limit: usize) -> Result<Tally> {
    let first = if lo.is_zero() {
        Nat::one()
    } else if lo.is_odd() {
        lo.clone()
    } else {
        lo.add_u64(1)
    };
    if &first > hi {
        return Ok(Tally::default());
    }
    let last = if hi.is_odd() {
        hi.clone()
    } else {
        hi.checked_sub_u64(1).expect("hi >= first >= 1")
    };
    let count_nat = last
        .checked_sub(&first)
        .expect("last >= first")
        .shr(1)
        .add_u64(1);
    let count = count_nat.to_u64().ok_or_else(|| {
        Error::InvalidConfig("range holds more odd integers than can be scanned".into())
    })?;

    let chunk_count = count.div_ceil(SCAN_CHUNK);
    let tallies: Vec<Tally> = (0..chunk_count)
        .into_par_iter()
        .map(|chunk| {
            let offset = chunk * SCAN_CHUNK;
            let len = SCAN_CHUNK.min(count - offset);
            let mut seed_nat = first.add(&Nat::from(offset).shl(1));
            let mut tally = Tally::default();
            for _ in 0..len {
                let seed = OddNat::new(seed_nat.clone()).expect("seeds are odd");
                tally.absorb(seed_nat.clone(), eval_seed(claim, &seed), limit);
                seed_nat = seed_nat.add_u64(2);
            }
            tally
        })
        .collect();
    Ok(merge(tallies, limit))
}

fn scan_exponents(claim: ClaimId, lo: &Nat, hi: &Nat, limit: usize) -> Result<Tally> {
    let lo = lo
        .to_u64()
        .ok_or_else(|| Error::InvalidConfig("exponent ranges must fit in a machine word".into()))?;
    let hi = hi
        .to_u64()
        .ok_or_else(|| Error::InvalidConfig("exponent ranges must fit in a machine word".into()))?;
    let count = hi - lo + 1;
    let chunk_count = count.div_ceil(SCAN_CHUNK);
    let tallies: Vec<Tally> = (0..chunk_count)
        .into_par_iter()
        .map(|chunk| {
            let start = lo + chunk * SCAN_CHUNK;
            let end = start + SCAN_CHUNK.min(count - chunk * SCAN_CHUNK);
            let mut tally = Tally::default();
            for p in start..end {
                tally.absorb(Nat::from(p), eval_exponent(claim, p), limit);
            }
            tally
        })
        .collect();
    Ok(merge(tallies, limit))
}

fn merge(tallies: Vec<Tally>, limit: usize) -> Tally {
    let mut merged = Tally::default();
    for tally in tallies {
        merged.checked += tally.checked;
        merged.skipped += tally.skipped;
        // Chunks cover ascending disjoint subranges, so concatenation in
        // chunk order is globally ascending.
        for cex in tally.counterexamples {
            if merged.counterexamples.len() < limit {
                merged.counterexamples.push(cex);
            }
        }
    }
    merged
}

/// One report per registered claim, in registry order.
pub fn run_all(lo: &Nat, hi: &Nat) -> Result<Vec<ClaimReport>> {
    ClaimId::ALL
        .iter()
        .map(|&claim| check_claim(claim, lo, hi, DEFAULT_COUNTEREXAMPLE_LIMIT))
        .collect()
}
