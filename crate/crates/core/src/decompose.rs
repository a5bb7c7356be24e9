//! The power-of-two decomposition `k = 2^p·h − 1` of an odd integer.
//!
//! `p` is the 2-adic valuation of `k + 1` and `h = (k + 1) / 2^p` is odd.
//! The pair `(p, h)` drives the entire case analysis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nat::OddNat;

/// An odd `k` written as `2^p·h − 1` with `p ≥ 1` and `h` odd.
///
/// Construction goes through [`decompose`] or [`Decomposition::from_parts`],
/// so the reconstruction identity always holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    k: OddNat,
    #[serde(with = "crate::serde_util::int_string")]
    p: u32,
    h: OddNat,
}

impl Decomposition {
    /// Builds the decomposition from the exponent and odd part, deriving
    /// `k = 2^p·h − 1`.
    pub fn from_parts(p: u32, h: OddNat) -> Result<Self> {
        if p == 0 {
            return Err(Error::ExponentTooSmall { p, min: 1 });
        }
        let k_nat = h
            .get()
            .shl(p)
            .checked_sub_u64(1)
            .expect("2^p·h >= 2 for p >= 1");
        let k = OddNat::new(k_nat).expect("2^p·h - 1 is odd for p >= 1");
        Ok(Decomposition { k, p, h })
    }

    pub fn k(&self) -> &OddNat {
        &self.k
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> &OddNat {
        &self.h
    }
}

impl<'de> Deserialize<'de> for Decomposition {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            k: OddNat,
            #[serde(with = "crate::serde_util::int_string")]
            p: u32,
            h: OddNat,
        }
        let raw = Raw::deserialize(deserializer)?;
        let rebuilt = Decomposition::from_parts(raw.p, raw.h).map_err(serde::de::Error::custom)?;
        if rebuilt.k != raw.k {
            return Err(serde::de::Error::custom(format!(
                "decomposition does not reconstruct: 2^{}·{} - 1 != {}",
                rebuilt.p, rebuilt.h, raw.k
            )));
        }
        Ok(rebuilt)
    }
}

/// Decomposes an odd `k` as `2^p·h − 1`.
pub fn decompose(k: &OddNat) -> Decomposition {
    let succ = k.get().add_u64(1);
    let p = succ.val2();
    let h = OddNat::new(succ.shr(p)).expect("(k+1)/2^p is odd");
    Decomposition { k: k.clone(), p, h }
}

/// `2^p mod 3`: 1 for even `p`, 2 for odd `p`.
///
/// `p = 0` is admitted; the result 1 is forced by `2^0 = 1`.
pub fn pow2_mod3(p: u64) -> u8 {
    if p % 2 == 0 {
        1
    } else {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::Nat;

    fn odd(v: u64) -> OddNat {
        OddNat::from_u64(v).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&odd(1));
        assert_eq!((d.p(), d.h().clone()), (1, odd(1)));
        let d = decompose(&odd(7));
        assert_eq!((d.p(), d.h().clone()), (3, odd(1)));
        let d = decompose(&odd(11));
        assert_eq!((d.p(), d.h().clone()), (2, odd(3)));
    }

    #[test]
    fn decompose_reconstructs() {
        for k in (1u64..4_001).step_by(2) {
            let k = odd(k);
            let d = decompose(&k);
            let rebuilt = d.h().get().shl(d.p()).checked_sub_u64(1).unwrap();
            assert_eq!(&rebuilt, k.get());
            assert!(d.h().get().is_odd());
            assert!(d.p() >= 1);
        }
    }

    #[test]
    fn from_parts_validates() {
        assert!(Decomposition::from_parts(0, odd(3)).is_err());
        let d = Decomposition::from_parts(3, odd(5)).unwrap();
        assert_eq!(d.k(), &odd(39));
    }

    #[test]
    fn pow2_mod3_parity() {
        assert_eq!(pow2_mod3(2), 1);
        assert_eq!(pow2_mod3(1), 2);
        assert_eq!(pow2_mod3(0), 1);
    }

    #[test]
    fn pow2_mod3_matches_exponentiation() {
        let mut residue = Nat::one();
        for p in 0u64..512 {
            assert_eq!(u64::from(pow2_mod3(p)), residue.mod3() as u64, "p = {p}");
            residue = residue.shl(1);
        }
    }

    #[test]
    fn serde_round_trip_rejects_tampering() {
        let d = decompose(&odd(39));
        let json = serde_json::to_string(&d).unwrap();
        let back: Decomposition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        // k inconsistent with (p, h)
        let bad = r#"{"k":"41","p":"3","h":"5"}"#;
        assert!(serde_json::from_str::<Decomposition>(bad).is_err());
    }
}
