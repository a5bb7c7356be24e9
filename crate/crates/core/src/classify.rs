//! The six-way case analysis of odd integers `k = 2^p·h − 1`, `k ≥ 3`.
//!
//! The cases partition by the exponent and the residue of `h` mod 3:
//!
//! | case | condition                         | attached data  |
//! |------|-----------------------------------|----------------|
//! | 1    | `p = 1`                           |                |
//! | 2    | `p ≥ 2`, `h ≡ 0 (mod 3)`          | `h = 3·h̄`      |
//! | 3    | `p ≥ 2`, `h ≡ 1 (mod 3)`, `p` odd | `h = 3ℓ + 1`   |
//! | 4    | `p ≥ 2`, `h ≡ 2 (mod 3)`, `p` even| `h = 3ℓ + 2`   |
//! | 5    | `p ≥ 2`, `h ≡ 1 (mod 3)`, `p` even| `h = 3ℓ + 1`   |
//! | 6    | `p ≥ 2`, `h ≡ 2 (mod 3)`, `p` odd | `h = 3ℓ + 2`   |
//!
//! `k = 1` is the terminal fixed point and is excluded.

use serde::{Deserialize, Serialize};

use crate::decompose::{decompose, Decomposition};
use crate::error::{Error, Result};
use crate::nat::{Nat, OddNat};

/// Case label without the attached data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseKind {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
}

impl CaseKind {
    pub fn name(self) -> &'static str {
        match self {
            CaseKind::Case1 => "Case1",
            CaseKind::Case2 => "Case2",
            CaseKind::Case3 => "Case3",
            CaseKind::Case4 => "Case4",
            CaseKind::Case5 => "Case5",
            CaseKind::Case6 => "Case6",
        }
    }
}

impl std::fmt::Display for CaseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The case of an odd `k ≥ 3` with its attached data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    Case1,
    Case2 { hbar: OddNat },
    Case3 { ell: Nat },
    Case4 { ell: Nat },
    Case5 { ell: Nat },
    Case6 { ell: Nat },
}

impl CaseTag {
    pub fn kind(&self) -> CaseKind {
        match self {
            CaseTag::Case1 => CaseKind::Case1,
            CaseTag::Case2 { .. } => CaseKind::Case2,
            CaseTag::Case3 { .. } => CaseKind::Case3,
            CaseTag::Case4 { .. } => CaseKind::Case4,
            CaseTag::Case5 { .. } => CaseKind::Case5,
            CaseTag::Case6 { .. } => CaseKind::Case6,
        }
    }

    /// `ℓ` from `h = 3ℓ + 1` or `h = 3ℓ + 2` (cases 3–6).
    pub fn ell(&self) -> Option<&Nat> {
        match self {
            CaseTag::Case3 { ell }
            | CaseTag::Case4 { ell }
            | CaseTag::Case5 { ell }
            | CaseTag::Case6 { ell } => Some(ell),
            _ => None,
        }
    }

    /// `h̄` from `h = 3·h̄` (case 2).
    pub fn hbar(&self) -> Option<&OddNat> {
        match self {
            CaseTag::Case2 { hbar } => Some(hbar),
            _ => None,
        }
    }
}

/// Classifies an odd `k ≥ 3` into exactly one case.
pub fn classify(k: &OddNat) -> Result<CaseTag> {
    classify_decomposition(&decompose(k))
}

/// Classifies from a precomputed decomposition.
pub fn classify_decomposition(d: &Decomposition) -> Result<CaseTag> {
    if d.k().is_one() {
        return Err(Error::TerminalSeed);
    }
    let p = d.p();
    if p == 1 {
        return Ok(CaseTag::Case1);
    }
    let h = d.h().get();
    let sub_exact = |delta: u64| {
        h.checked_sub_u64(delta)
            .expect("h exceeds its residue")
            .div_exact_u64(3)
            .expect("residue arithmetic guarantees divisibility")
    };
    match (h.mod3(), p % 2) {
        (0, _) => {
            let hbar = OddNat::new(sub_exact(0)).expect("h/3 is odd for odd h");
            Ok(CaseTag::Case2 { hbar })
        }
        (1, 1) => Ok(CaseTag::Case3 { ell: sub_exact(1) }),
        (2, 0) => Ok(CaseTag::Case4 { ell: sub_exact(2) }),
        (1, 0) => Ok(CaseTag::Case5 { ell: sub_exact(1) }),
        (2, 1) => Ok(CaseTag::Case6 { ell: sub_exact(2) }),
        _ => unreachable!("mod-3 residue is 0, 1 or 2"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd(v: u64) -> OddNat {
        OddNat::from_u64(v).unwrap()
    }

    #[test]
    fn rejects_terminal_one() {
        assert!(matches!(classify(&odd(1)), Err(Error::TerminalSeed)));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&odd(5)).unwrap(), CaseTag::Case1);
        assert_eq!(
            classify(&odd(3)).unwrap(),
            CaseTag::Case5 { ell: Nat::zero() }
        );
        assert_eq!(
            classify(&odd(39)).unwrap(),
            CaseTag::Case6 {
                ell: Nat::from(1u64)
            }
        );
        assert_eq!(classify(&odd(11)).unwrap(), CaseTag::Case2 { hbar: odd(1) });
        assert_eq!(
            classify(&odd(7)).unwrap(),
            CaseTag::Case3 { ell: Nat::zero() }
        );
        assert_eq!(
            classify(&odd(19)).unwrap(),
            CaseTag::Case4 {
                ell: Nat::from(1u64)
            }
        );
    }

    #[test]
    fn attached_data_reconstructs_h() {
        for k in (3u64..4_001).step_by(2) {
            let k = odd(k);
            let d = decompose(&k);
            let tag = classify(&k).unwrap();
            match &tag {
                CaseTag::Case1 => assert_eq!(d.p(), 1),
                CaseTag::Case2 { hbar } => {
                    assert_eq!(&hbar.get().mul_u64(3), d.h().get());
                }
                CaseTag::Case3 { ell } | CaseTag::Case5 { ell } => {
                    assert_eq!(&ell.mul_u64(3).add_u64(1), d.h().get());
                }
                CaseTag::Case4 { ell } | CaseTag::Case6 { ell } => {
                    assert_eq!(&ell.mul_u64(3).add_u64(2), d.h().get());
                }
            }
        }
    }

    #[test]
    fn exactly_one_case_predicate_holds() {
        for k in (3u64..20_001).step_by(2) {
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
            assert_eq!(predicates.iter().filter(|&&b| b).count(), 1, "k = {k}");
            let expected = [
                CaseKind::Case1,
                CaseKind::Case2,
                CaseKind::Case3,
                CaseKind::Case4,
                CaseKind::Case5,
                CaseKind::Case6,
            ][predicates.iter().position(|&b| b).unwrap()];
            assert_eq!(classify(&k).unwrap().kind(), expected);
        }
    }
}
