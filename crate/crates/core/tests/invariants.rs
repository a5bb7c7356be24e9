//! Exhaustive invariants for the map, decomposition, and case analysis.

use num_bigint::BigUint;
use num_traits::One;
use syracuse::{classify, decompose, f_step, g_step, pow2_mod3, CaseKind, Nat, OddNat};

fn odd(v: u64) -> OddNat {
    OddNat::from_u64(v).unwrap()
}

#[test]
fn f_step_identity_holds_to_one_million() {
    for k in (1u64..=1_000_000).step_by(2) {
        let k = odd(k);
        let step = f_step(&k);
        assert!(step.valuation >= 1);
        assert!(step.next.get().is_odd());
        assert_eq!(
            step.next.get().shl(step.valuation),
            k.get().times3_plus1(),
            "3k+1 = 2^n·next violated at k = {k}"
        );
    }
}

#[test]
fn decompose_reconstructs_to_one_million() {
    for k in (1u64..=1_000_000).step_by(2) {
        let k = odd(k);
        let d = decompose(&k);
        assert!(d.h().get().is_odd());
        assert_eq!(
            d.h().get().shl(d.p()).checked_sub_u64(1).unwrap(),
            *k.get(),
            "k = 2^p·h - 1 violated at k = {k}"
        );
    }
}

#[test]
fn pow2_mod3_matches_big_integer_exponentiation() {
    for p in 0u64..=10_000 {
        let exact = (BigUint::one() << p) % BigUint::from(3u32);
        assert_eq!(
            BigUint::from(pow2_mod3(p)),
            exact,
            "parity shortcut disagrees with 2^{p} mod 3"
        );
    }
}

#[test]
fn cases_partition_to_one_million() {
    for k in (3u64..=1_000_000).step_by(2) {
        let k = odd(k);
        let d = decompose(&k);
        let (p, h3) = (d.p(), d.h().get().mod3());
        let predicates = [
            p == 1,
            p >= 2 && h3 == 0,
            p >= 2 && h3 == 1 && p % 2 == 1,
            p >= 2 && h3 == 2 && p % 2 == 0,
            p >= 2 && h3 == 1 && p % 2 == 0,
            p >= 2 && h3 == 2 && p % 2 == 1,
        ];
        assert_eq!(
            predicates.iter().filter(|&&b| b).count(),
            1,
            "partition violated at k = {k}"
        );
        let tag = classify(&k).unwrap();
        let expected = [
            CaseKind::Case1,
            CaseKind::Case2,
            CaseKind::Case3,
            CaseKind::Case4,
            CaseKind::Case5,
            CaseKind::Case6,
        ][predicates.iter().position(|&b| b).unwrap()];
        assert_eq!(tag.kind(), expected, "k = {k}");
    }
}

#[test]
fn mod3_correlation_to_one_million() {
    for k in (3u64..=1_000_000).step_by(2) {
        let k = odd(k);
        let d = decompose(&k);
        if d.p() < 2 {
            continue;
        }
        let residue = k.get().mod3();
        let kind = classify(&k).unwrap().kind();
        let expected_residue = match kind {
            CaseKind::Case1 => unreachable!("p >= 2 excludes Case1"),
            CaseKind::Case2 => 2,
            CaseKind::Case3 | CaseKind::Case4 => 1,
            CaseKind::Case5 | CaseKind::Case6 => 0,
        };
        assert_eq!(residue, expected_residue, "k = {k} ({kind})");
    }
}

/// Iterating g reaches 1 iff iterating f reaches 1, and the f-orbit is
/// exactly the odd subsequence of the g-orbit.
#[test]
fn g_and_f_orbits_are_consistent_to_one_hundred_thousand() {
    for k in (1u64..=100_000).step_by(2) {
        let seed = odd(k);

        // Odd subsequence of the g-orbit, bounded generously.
        let mut odd_subsequence = Vec::new();
        let mut current = Nat::from(k);
        let mut g_reached_one = false;
        for _ in 0..10_000_000u64 {
            if current.is_odd() {
                odd_subsequence.push(current.clone());
            }
            if current.is_one() {
                g_reached_one = true;
                break;
            }
            current = g_step(&current).unwrap();
        }
        assert!(g_reached_one, "g-orbit of {k} did not reach 1 in bound");

        // f-orbit, including the seed.
        let mut f_orbit = vec![seed.get().clone()];
        let mut cur = seed;
        while !cur.is_one() {
            cur = f_step(&cur).next;
            f_orbit.push(cur.get().clone());
        }

        assert_eq!(f_orbit, odd_subsequence, "k = {k}");
    }
}
