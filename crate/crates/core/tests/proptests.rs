//! Property tests: hybrid arithmetic against pure big integers, and the
//! map/decomposition contracts on values that straddle the inline boundary.

use num_bigint::BigUint;
use proptest::prelude::*;
use syracuse::{decompose, f_step, orbit_stats, preimages, Nat, OddNat};

fn biguint_strategy() -> impl Strategy<Value = BigUint> {
    // Bit lengths from tiny to well past the u128 fast path.
    (1usize..=200, proptest::collection::vec(any::<u8>(), 1..=25)).prop_map(|(bits, bytes)| {
        let mut v = BigUint::from_bytes_le(&bytes);
        v |= BigUint::from(1u32) << (bits.min(bytes.len() * 8).saturating_sub(1));
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn hybrid_arithmetic_matches_biguint(a in biguint_strategy(), b in biguint_strategy(), shift in 0u32..300) {
        let na = Nat::from(a.clone());
        let nb = Nat::from(b.clone());
        prop_assert_eq!(na.add(&nb).to_biguint(), &a + &b);
        prop_assert_eq!(na.mul(&nb).to_biguint(), &a * &b);
        prop_assert_eq!(na.shl(shift).to_biguint(), &a << shift);
        prop_assert_eq!(na.shr(shift).to_biguint(), &a >> shift);
        prop_assert_eq!(na.times3_plus1().to_biguint(), &a * 3u32 + 1u32);
        prop_assert_eq!(BigUint::from(na.mod3() as u32), &a % BigUint::from(3u32));
        prop_assert_eq!(na.checked_sub(&nb).map(|d| d.to_biguint()), (a >= b).then(|| &a - &b));
    }

    #[test]
    fn f_step_contract_on_arbitrary_odds(v in biguint_strategy()) {
        let k = OddNat::new(Nat::from(v | BigUint::from(1u32))).unwrap();
        let step = f_step(&k);
        let (expect_next, expect_val) = syracuse_testkit::f(&k.get().to_biguint());
        prop_assert_eq!(step.next.get().to_biguint(), expect_next);
        prop_assert_eq!(u64::from(step.valuation), u64::from(expect_val));
    }

    #[test]
    fn decompose_contract_on_arbitrary_odds(v in biguint_strategy()) {
        let k = OddNat::new(Nat::from(v | BigUint::from(1u32))).unwrap();
        let d = decompose(&k);
        let (p, h) = syracuse_testkit::decompose(&k.get().to_biguint());
        prop_assert_eq!(d.p(), p);
        prop_assert_eq!(d.h().get().to_biguint(), h);
    }

    #[test]
    fn preimage_sets_match_brute_force(k in 1u64..2_000, s_max in 1u32..=8) {
        let k = k | 1;
        let set = preimages(&OddNat::from_u64(k).unwrap(), s_max).unwrap();
        let got: Vec<(u64, u32)> = set
            .members
            .iter()
            .map(|p| (p.m.get().to_u64().unwrap(), p.valuation))
            .collect();
        prop_assert_eq!(got, syracuse_testkit::preimages_brute(k, s_max));
    }

    #[test]
    fn orbit_stats_match_naive_on_random_seeds(k in 1u64..2_000_000) {
        let k = k | 1;
        let stats = orbit_stats(&OddNat::from_u64(k).unwrap(), 1_000_000);
        let naive = syracuse_testkit::orbit_stats(&syracuse_testkit::big(k), 1_000_000);
        prop_assert_eq!(stats.collatz_steps, naive.collatz_steps);
        prop_assert_eq!(stats.syracuse_steps, naive.syracuse_steps);
        prop_assert_eq!(stats.peak.to_biguint(), naive.peak);
    }

    #[test]
    fn nat_serde_round_trips(v in biguint_strategy()) {
        let n = Nat::from(v);
        let json = serde_json::to_string(&n).unwrap();
        let back: Nat = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, n);
    }
}
