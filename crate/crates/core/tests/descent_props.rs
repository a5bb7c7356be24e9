//! Exhaustive and randomized properties of the descent constructions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syracuse::{
    case34_identity_check, case34_m, case34_r, classify, decompose, descent::Comparison, expansion,
    f_iterate, f_step, peak_value, preimages, CaseKind, Decomposition, Integrality, Nat, OddNat,
};

fn odd(v: u64) -> OddNat {
    OddNat::from_u64(v).unwrap()
}

#[test]
fn case2_predecessor_descends_to_one_million() {
    let mut seen = 0u64;
    for k in (3u64..=1_000_000).step_by(2) {
        let k = odd(k);
        let tag = classify(&k).unwrap();
        let Some(hbar) = tag.hbar() else { continue };
        seen += 1;
        let d = decompose(&k);
        let kbar = OddNat::new(hbar.get().shl(d.p() + 1).checked_sub_u64(1).unwrap()).unwrap();
        let step = f_step(&kbar);
        assert_eq!(step.next, k, "f(kbar) != k at k = {k}");
        assert!(kbar < k, "kbar >= k at k = {k}");
    }
    assert!(seen > 80_000, "Case2 seeds should be plentiful: {seen}");
}

#[test]
fn case34_m_is_exact_odd_with_valuation_two_to_one_million() {
    let mut seen = 0u64;
    for k in (3u64..=1_000_000).step_by(2) {
        let k = odd(k);
        let kind = classify(&k).unwrap().kind();
        if !matches!(kind, CaseKind::Case3 | CaseKind::Case4) {
            continue;
        }
        seen += 1;
        let m = case34_m(&k).expect("m = (4k-1)/3 must be exact in cases 3/4");
        let step = f_step(&m);
        assert_eq!((step.next, step.valuation), (k.clone(), 2), "k = {k}");
    }
    assert!(seen > 80_000, "Case3/4 seeds should be plentiful: {seen}");
}

/// r = (4m−1)/3 is an integer exactly when k ≡ 1 (mod 9).
#[test]
fn r_integrality_characterization_to_one_million() {
    for k in (3u64..=1_000_000).step_by(2) {
        let k_odd = odd(k);
        let kind = classify(&k_odd).unwrap().kind();
        if !matches!(kind, CaseKind::Case3 | CaseKind::Case4) {
            continue;
        }
        let m = case34_m(&k_odd).unwrap();
        let verdict = case34_r(&m).unwrap();
        let integral = matches!(verdict, Integrality::Integral(_));
        assert_eq!(integral, k % 9 == 1, "characterization fails at k = {k}");
    }
}

/// Whenever r is integral: 16k = 9r + 7 exactly, f²(r) = k, and r > k for
/// every k > 1 (the descent direction never materializes).
#[test]
fn integral_r_satisfies_identity_to_one_million() {
    let mut integral_seen = 0u64;
    for k in (3u64..=1_000_000).step_by(2) {
        let k = odd(k);
        let kind = classify(&k).unwrap().kind();
        if !matches!(kind, CaseKind::Case3 | CaseKind::Case4) {
            continue;
        }
        let m = case34_m(&k).unwrap();
        if let Integrality::Integral(r) = case34_r(&m).unwrap() {
            integral_seen += 1;
            let report = case34_identity_check(&k, &r).unwrap();
            assert_eq!(report.lhs, report.rhs);
            assert_eq!(report.r_versus_k, Comparison::Greater, "k = {k}");
            assert_eq!(f_iterate(&r, 2), k, "f^2(r) != k at k = {k}");
        }
    }
    assert!(
        integral_seen > 10_000,
        "integral r should occur: {integral_seen}"
    );
}

/// Sound and complete against a brute-force scan of every odd m up to
/// (2^20·10^4)/3, bucketed by image in one pass.
#[test]
fn preimages_match_brute_force_scan() {
    const K_MAX: u64 = 10_000;
    const S_MAX: u32 = 20;
    let buckets = syracuse_testkit::preimage_buckets(K_MAX, S_MAX);
    for k in (1u64..=K_MAX).step_by(2) {
        let set = preimages(&odd(k), S_MAX).unwrap();
        let got: Vec<(u64, u32)> = set
            .members
            .iter()
            .map(|p| (p.m.get().to_u64().unwrap(), p.valuation))
            .collect();
        assert_eq!(got, buckets[k as usize], "preimage set differs at k = {k}");
    }
}

#[test]
fn preimages_empty_iff_k_divisible_by_three() {
    for k in (1u64..=2_001).step_by(2) {
        let set = preimages(&odd(k), 24).unwrap();
        assert_eq!(set.members.is_empty(), k % 3 == 0, "k = {k}");
        // Parity class of the valuations matches k mod 3.
        for member in &set.members {
            match k % 3 {
                1 => assert_eq!(member.valuation % 2, 0, "k = {k}"),
                2 => assert_eq!(member.valuation % 2, 1, "k = {k}"),
                _ => unreachable!(),
            }
        }
    }
}

#[test]
fn case56_have_no_preimages_to_one_million() {
    for k in (3u64..=1_000_000).step_by(2) {
        let k = odd(k);
        let kind = classify(&k).unwrap().kind();
        if !matches!(kind, CaseKind::Case5 | CaseKind::Case6) {
            continue;
        }
        assert_eq!(k.get().mod3(), 0);
        let set = preimages(&k, 64).unwrap();
        assert!(set.members.is_empty(), "unexpected preimage for k = {k}");
    }
}

/// Ten thousand random decompositions: the closed form agrees with the
/// iterates and climbs strictly, and the peak's odd part is f^p(k).
#[test]
fn expansion_chain_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5752_4143);
    for _ in 0..10_000 {
        let p: u32 = rng.random_range(2..=30);
        let h = odd(rng.random_range(0..50_000) * 2 + 1);
        let d = Decomposition::from_parts(p, h).unwrap();
        let mut previous = d.k().clone();
        for n in 1..p {
            let value = expansion(&d, n).unwrap();
            assert_eq!(value, f_iterate(d.k(), n as u64), "p = {p}, n = {n}");
            assert!(value > previous, "chain not increasing at p = {p}, n = {n}");
            previous = value;
        }
        let pv = peak_value(&d).unwrap();
        assert_eq!(
            pv.odd_part,
            f_iterate(d.k(), p as u64),
            "peak odd part differs at p = {p}"
        );
        assert_eq!(
            pv.pre_division,
            Nat::pow3(p).mul(d.h().get()).checked_sub_u64(1).unwrap()
        );
        assert!(pv.pre_division.is_even());
        assert_eq!(pv.odd_part.get().shl(pv.valuation), pv.pre_division);
    }
}
