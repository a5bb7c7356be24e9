//! Naive reference implementations used as independent test oracles.
//!
//! Everything here sticks to literal definitions and straightforward big
//! integer arithmetic. No fast paths, no shared code with the main crate:
//! when the two disagree, one of them is wrong, and that is the point.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn mod3(x: &BigUint) -> u32 {
    (x % BigUint::from(3u32))
        .to_u32_digits()
        .first()
        .copied()
        .unwrap_or(0)
}

fn is_odd(x: &BigUint) -> bool {
    x.bit(0)
}

/// Literal Collatz map: 3x+1 on odd, halving on even.
pub fn g(x: &BigUint) -> BigUint {
    if is_odd(x) {
        x * 3u32 + 1u32
    } else {
        x >> 1
    }
}

/// Syracuse map by repeated halving of 3k+1: returns (odd part, valuation).
pub fn f(k: &BigUint) -> (BigUint, u32) {
    assert!(is_odd(k) && !k.is_zero());
    let mut t = k * 3u32 + 1u32;
    let mut n = 0u32;
    while !is_odd(&t) {
        t >>= 1;
        n += 1;
    }
    (t, n)
}

pub fn f_iter(k: &BigUint, count: u64) -> BigUint {
    let mut cur = k.clone();
    for _ in 0..count {
        cur = f(&cur).0;
    }
    cur
}

/// (p, h) with k = 2^p·h − 1, found by repeated halving of k+1.
pub fn decompose(k: &BigUint) -> (u32, BigUint) {
    assert!(is_odd(k));
    let mut t = k + 1u32;
    let mut p = 0u32;
    while !is_odd(&t) {
        t >>= 1;
        p += 1;
    }
    (p, t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::C1 => "Case1",
            Case::C2 => "Case2",
            Case::C3 => "Case3",
            Case::C4 => "Case4",
            Case::C5 => "Case5",
            Case::C6 => "Case6",
        }
    }
}

/// Case of an odd k >= 3 from the (p, h mod 3, parity of p) table.
pub fn classify(k: &BigUint) -> Case {
    assert!(*k >= big(3));
    let (p, h) = decompose(k);
    if p == 1 {
        return Case::C1;
    }
    match (mod3(&h), p % 2) {
        (0, _) => Case::C2,
        (1, 1) => Case::C3,
        (2, 0) => Case::C4,
        (1, 0) => Case::C5,
        (2, 1) => Case::C6,
        _ => unreachable!(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitStats {
    pub collatz_steps: u64,
    pub syracuse_steps: u64,
    pub peak: BigUint,
    pub reached_one: bool,
}

/// Orbit statistics by literally iterating g, counting f-steps on the side.
/// The budget caps f-steps, matching the bounded iteration contract.
pub fn orbit_stats(k: &BigUint, budget: u64) -> OrbitStats {
    assert!(is_odd(k) && !k.is_zero());
    let one = BigUint::one();
    let mut cur = k.clone();
    let mut collatz_steps = 0u64;
    let mut syracuse_steps = 0u64;
    let mut peak = k.clone();
    while cur != one && syracuse_steps < budget {
        // One f-step = the 3x+1 move plus every halving after it.
        syracuse_steps += 1;
        cur = g(&cur);
        collatz_steps += 1;
        if cur > peak {
            peak = cur.clone();
        }
        while !is_odd(&cur) {
            cur = g(&cur);
            collatz_steps += 1;
        }
    }
    OrbitStats {
        collatz_steps,
        syracuse_steps,
        peak,
        reached_one: cur == one,
    }
}

/// Stopping-time and peak record setters over the odd integers of [lo, hi].
pub fn records(lo: u64, hi: u64) -> (Vec<(u64, u64)>, Vec<(u64, BigUint)>) {
    let mut stopping = Vec::new();
    let mut peaks = Vec::new();
    let mut best_steps: Option<u64> = None;
    let mut best_peak: Option<BigUint> = None;
    let start = if lo % 2 == 1 { lo } else { lo + 1 };
    let mut k = start;
    while k <= hi {
        let stats = orbit_stats(&big(k), u64::MAX);
        if best_steps.is_none_or(|b| stats.collatz_steps > b) {
            stopping.push((k, stats.collatz_steps));
            best_steps = Some(stats.collatz_steps);
        }
        if best_peak.as_ref().is_none_or(|b| stats.peak > *b) {
            peaks.push((k, stats.peak.clone()));
            best_peak = Some(stats.peak);
        }
        k += 2;
    }
    (stopping, peaks)
}

/// Brute-force preimages: every odd m up to (2^s_max · k)/3 with f(m) = k
/// at valuation <= s_max. Single-seed scan; use `preimage_buckets` for bulk.
pub fn preimages_brute(k: u64, s_max: u32) -> Vec<(u64, u32)> {
    let bound = (1u64 << s_max) * k / 3;
    let mut out = Vec::new();
    let mut m = 1u64;
    while m <= bound {
        let (fm, s) = f_u64(m);
        if fm == k && s <= s_max {
            out.push((m, s));
        }
        m += 2;
    }
    out
}

/// One pass over all odd m up to (2^s_max · k_max)/3, bucketing preimages by
/// their image. Equivalent to running `preimages_brute` for every odd
/// k <= k_max: any preimage of k beyond k's own scan bound needs a
/// valuation above s_max and is filtered the same way.
pub fn preimage_buckets(k_max: u64, s_max: u32) -> Vec<Vec<(u64, u32)>> {
    let bound = (1u64 << s_max) * k_max / 3;
    let mut buckets = vec![Vec::new(); (k_max + 1) as usize];
    let mut m = 1u64;
    while m <= bound {
        let (fm, s) = f_u64(m);
        if fm <= k_max && s <= s_max {
            buckets[fm as usize].push((m, s));
        }
        m += 2;
    }
    buckets
}

fn f_u64(m: u64) -> (u64, u32) {
    let t = m
        .checked_mul(3)
        .and_then(|t| t.checked_add(1))
        .expect("oracle scan domain must fit u64");
    let s = t.trailing_zeros();
    (t >> s, s)
}

/// Naive verdict for one registered claim over [lo, hi]: verdict name,
/// smallest counterexample, and how many elements were actually evaluated.
pub fn check_claim(id: &str, lo: u64, hi: u64) -> (&'static str, Option<u64>, u64) {
    let mut checked = 0u64;
    let mut smallest: Option<u64> = None;
    let fail = |value: u64, smallest: &mut Option<u64>| {
        if smallest.is_none() {
            *smallest = Some(value);
        }
    };

    if id == "L1A" || id == "L1B" {
        let want_even = id == "L1A";
        let expected = if want_even { 1u32 } else { 2u32 };
        for p in lo..=hi {
            if (p % 2 == 0) != want_even {
                continue;
            }
            checked += 1;
            let residue = (BigUint::one() << p) % BigUint::from(3u32);
            if residue != BigUint::from(expected) {
                fail(p, &mut smallest);
            }
        }
    } else {
        let start = if lo % 2 == 1 { lo } else { lo + 1 };
        let mut k = start.max(3);
        while k <= hi {
            if let Some(result) = eval_seed_claim(id, k) {
                checked += 1;
                if !result {
                    fail(k, &mut smallest);
                }
            }
            k += 2;
        }
    }

    let verdict = if checked == 0 {
        "VACUOUS"
    } else if smallest.is_some() {
        "FAILS"
    } else {
        "HOLDS_ON_RANGE"
    };
    (verdict, smallest, checked)
}

/// `Some(pass)` when the claim's precondition (and antecedent) holds at k.
fn eval_seed_claim(id: &str, k: u64) -> Option<bool> {
    let kb = big(k);
    let case = classify(&kb);
    let (p, h) = decompose(&kb);
    match id {
        "C1_DESCENT" => (case == Case::C1).then(|| f(&kb).0 < kb),
        "C2_DESCENT" => (case == Case::C2).then(|| {
            let hbar = &h / 3u32;
            let kbar = (hbar << (p + 1)) - 1u32;
            f(&kbar).0 == kb && kbar < kb
        }),
        "C34_M_INTEGRAL" => (case == Case::C3 || case == Case::C4).then(|| {
            let numerator = (&kb << 2) - 1u32;
            if mod3(&numerator) == 0 {
                let m = numerator / 3u32;
                let (fm, s) = f(&m);
                is_odd(&m) && fm == kb && s == 2
            } else {
                false
            }
        }),
        "C3_R_INTEGRAL" | "C4_R_INTEGRAL" => {
            let want = if id == "C3_R_INTEGRAL" {
                Case::C3
            } else {
                Case::C4
            };
            (case == want).then(|| {
                let m = ((&kb << 2) - 1u32) / 3u32;
                let numerator = (&m << 2) - 1u32;
                mod3(&numerator) == 0
            })
        }
        "C3_R_LESS_K" | "C4_R_LESS_K" => {
            let want = if id == "C3_R_LESS_K" {
                Case::C3
            } else {
                Case::C4
            };
            if case != want {
                return None;
            }
            let m = ((&kb << 2) - 1u32) / 3u32;
            let numerator = (&m << 2) - 1u32;
            if mod3(&numerator) != 0 {
                return None; // antecedent fails: r not an integer
            }
            Some(numerator / 3u32 < kb)
        }
        "C56_NO_PREIMAGE" => (case == Case::C5 || case == Case::C6).then(|| {
            for s in 1..=64u32 {
                if mod3(&((&kb << s) - 1u32)) == 0 {
                    return false;
                }
            }
            mod3(&kb) == 0
        }),
        "EXPANSION" => (case == Case::C5 || case == Case::C6).then(|| {
            let mut previous = kb.clone();
            for n in 1..p {
                let formula = BigUint::from(3u32).pow(n) * (&h << (p - n)) - 1u32;
                if f_iter(&kb, n as u64) != formula || formula <= previous {
                    return false;
                }
                previous = formula;
            }
            true
        }),
        "MOD3_CORRELATION" => (p >= 2).then(|| {
            let residue = mod3(&kb);
            match case {
                Case::C1 => false,
                Case::C2 => residue == 2,
                Case::C3 | Case::C4 => residue == 1,
                Case::C5 | Case::C6 => residue == 0,
            }
        }),
        "IDENTITY_16K" => {
            if case != Case::C3 && case != Case::C4 {
                return None;
            }
            let m = ((&kb << 2) - 1u32) / 3u32;
            let numerator = (&m << 2) - 1u32;
            if mod3(&numerator) != 0 {
                return None;
            }
            let r = numerator / 3u32;
            Some((&kb << 4) == &r * 9u32 + 7u32 && f_iter(&r, 2) == kb)
        }
        other => panic!("unknown claim id {other}"),
    }
}

/// All registered claim identifiers, registry order.
pub const CLAIM_IDS: [&str; 13] = [
    "L1A",
    "L1B",
    "C1_DESCENT",
    "C2_DESCENT",
    "C34_M_INTEGRAL",
    "C3_R_INTEGRAL",
    "C4_R_INTEGRAL",
    "C3_R_LESS_K",
    "C4_R_LESS_K",
    "C56_NO_PREIMAGE",
    "EXPANSION",
    "MOD3_CORRELATION",
    "IDENTITY_16K",
];
