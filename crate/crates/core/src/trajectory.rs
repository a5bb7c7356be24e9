//! Orbit statistics under `g` and `f`, and bounded membership in the set of
//! odd integers whose trajectory reaches 1.

use serde::{Deserialize, Serialize};

use crate::nat::{Nat, OddNat};

/// Default per-seed budget in `f`-steps. No seed below 2^60 is known to need
/// anywhere near this many; the cap guards against unbounded iteration.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Statistics of one orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryStats {
    pub seed: OddNat,
    /// Applications of `g` to reach 1 (each halving and each `3x+1` counted).
    #[serde(with = "crate::serde_util::int_string")]
    pub collatz_steps: u64,
    /// Applications of `f` to reach 1.
    #[serde(with = "crate::serde_util::int_string")]
    pub syracuse_steps: u64,
    /// Maximum value attained along the `g`-orbit, even intermediates
    /// included; that is where overflow risk lives.
    pub peak: Nat,
    pub reached_one: bool,
    pub budget_exhausted: bool,
}

/// Iterates `f` from `k` until reaching 1 or spending `budget` `f`-steps.
pub fn orbit_stats(k: &OddNat, budget: u64) -> TrajectoryStats {
    let mut current = k.clone();
    let mut collatz_steps = 0u64;
    let mut syracuse_steps = 0u64;
    let mut peak = k.get().clone();
    while !current.is_one() && syracuse_steps < budget {
        let t = current.get().times3_plus1();
        if t > peak {
            peak = t.clone();
        }
        let n = t.val2();
        current = OddNat::new(t.shr(n)).expect("odd part of 3k+1 is odd");
        syracuse_steps += 1;
        collatz_steps += 1 + u64::from(n);
    }
    let reached_one = current.is_one();
    TrajectoryStats {
        seed: k.clone(),
        collatz_steps,
        syracuse_steps,
        peak,
        reached_one,
        budget_exhausted: !reached_one,
    }
}

/// Bounded membership verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Verified,
    BudgetExceeded,
}

/// Whether the `f`-orbit of `k` reaches 1 within `budget` steps.
pub fn in_e_bounded(k: &OddNat, budget: u64) -> Membership {
    if orbit_stats(k, budget).reached_one {
        Membership::Verified
    } else {
        Membership::BudgetExceeded
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd(v: u64) -> OddNat {
        OddNat::from_u64(v).unwrap()
    }

    #[test]
    fn terminal_seed() {
        let s = orbit_stats(&odd(1), 10);
        assert_eq!(s.collatz_steps, 0);
        assert_eq!(s.syracuse_steps, 0);
        assert_eq!(s.peak, Nat::from(1u64));
        assert!(s.reached_one);
        assert!(!s.budget_exhausted);
    }

    #[test]
    fn orbit_of_five() {
        // 5 -> 16 -> 8 -> 4 -> 2 -> 1
        let s = orbit_stats(&odd(5), 100);
        assert_eq!(s.collatz_steps, 5);
        assert_eq!(s.syracuse_steps, 1);
        assert_eq!(s.peak, Nat::from(16u64));
        assert!(s.reached_one);
    }

    #[test]
    fn orbit_of_twenty_seven() {
        let s = orbit_stats(&odd(27), DEFAULT_BUDGET);
        assert_eq!(s.collatz_steps, 111);
        assert_eq!(s.syracuse_steps, 41);
        assert_eq!(s.peak, Nat::from(9232u64));
        assert!(s.reached_one);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let s = orbit_stats(&odd(27), 3);
        assert!(!s.reached_one);
        assert!(s.budget_exhausted);
        assert_eq!(s.syracuse_steps, 3);
        assert_eq!(in_e_bounded(&odd(27), 3), Membership::BudgetExceeded);
        assert_eq!(in_e_bounded(&odd(27), DEFAULT_BUDGET), Membership::Verified);
        assert_eq!(in_e_bounded(&odd(1), 10), Membership::Verified);
    }

    #[test]
    fn step_counts_are_consistent() {
        for k in (1u64..501).step_by(2) {
            let k = odd(k);
            let s = orbit_stats(&k, DEFAULT_BUDGET);
            assert!(s.reached_one);
            // Each f-step is one 3x+1 plus its halvings.
            let mut valuations = 0u64;
            let mut cur = k.clone();
            for _ in 0..s.syracuse_steps {
                let step = crate::map::f_step(&cur);
                valuations += u64::from(step.valuation);
                cur = step.next;
            }
            assert_eq!(s.collatz_steps, s.syracuse_steps + valuations);
            assert!(cur.is_one());
        }
    }
}
