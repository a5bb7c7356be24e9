//! The Collatz map `g` and the Syracuse map `f`.
//!
//! `g` acts on all positive integers (`3x+1` on odd, halving on even).
//! `f` acts on odd positive integers only: `f(k)` is the odd part of
//! `3k+1`, so `3k+1 = 2^n·f(k)` with `n ≥ 1` the 2-adic valuation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nat::{Nat, OddNat};

/// One application of the Syracuse map together with the valuation it
/// divided out: `3k + 1 = 2^valuation · next`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyracuseStep {
    pub next: OddNat,
    #[serde(with = "crate::serde_util::int_string")]
    pub valuation: u32,
}

/// One application of the Collatz map: `3x+1` for odd `x`, `x/2` for even.
pub fn g_step(x: &Nat) -> Result<Nat> {
    if x.is_zero() {
        return Err(Error::Zero);
    }
    if x.is_odd() {
        Ok(x.times3_plus1())
    } else {
        Ok(x.shr(1))
    }
}

/// One application of the Syracuse map.
pub fn f_step(k: &OddNat) -> SyracuseStep {
    let t = k.get().times3_plus1();
    let valuation = t.val2();
    let next = OddNat::new(t.shr(valuation)).expect("odd part of 3k+1 is odd");
    SyracuseStep { next, valuation }
}

/// `count`-fold composition of the Syracuse map; `count = 0` is the identity.
pub fn f_iterate(k: &OddNat, count: u64) -> OddNat {
    let mut current = k.clone();
    for _ in 0..count {
        current = f_step(&current).next;
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd(v: u64) -> OddNat {
        OddNat::from_u64(v).unwrap()
    }

    #[test]
    fn g_step_definition() {
        assert_eq!(g_step(&Nat::from(1u64)).unwrap(), Nat::from(4u64));
        assert_eq!(g_step(&Nat::from(4u64)).unwrap(), Nat::from(2u64));
        assert_eq!(g_step(&Nat::from(7u64)).unwrap(), Nat::from(22u64));
        assert!(matches!(g_step(&Nat::zero()), Err(Error::Zero)));
    }

    #[test]
    fn f_step_examples() {
        // 3·1+1 = 4 = 2^2·1: the trivial fixed point.
        let s = f_step(&odd(1));
        assert_eq!((s.next.clone(), s.valuation), (odd(1), 2));
        // 22 = 2·11
        let s = f_step(&odd(7));
        assert_eq!((s.next.clone(), s.valuation), (odd(11), 1));
        // 40 = 2^3·5
        let s = f_step(&odd(13));
        assert_eq!((s.next.clone(), s.valuation), (odd(5), 3));
    }

    #[test]
    fn f_step_reconstructs_3k_plus_1() {
        for k in (1u64..2_001).step_by(2) {
            let k = odd(k);
            let s = f_step(&k);
            assert_eq!(s.next.get().shl(s.valuation), k.get().times3_plus1());
            assert!(s.next.get().is_odd());
            assert!(s.valuation >= 1);
        }
    }

    #[test]
    fn f_iterate_examples() {
        assert_eq!(f_iterate(&odd(7), 0), odd(7));
        // 7 -> 11 -> 17
        assert_eq!(f_iterate(&odd(7), 2), odd(17));
        assert_eq!(f_iterate(&odd(1), 100), odd(1));
    }
}
