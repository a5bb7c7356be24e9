//! Exact non-negative integers with a double-word fast path.
//!
//! Trajectory values overflow 64 bits even for small seeds, so [`Nat`] keeps
//! values inline in a `u128` while they fit and promotes to a heap big
//! integer beyond that. Every inline operation is overflow-checked and
//! escalates instead of wrapping; results that fit two words are demoted
//! again so each value has exactly one representation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary-precision non-negative integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Nat(Repr);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Small(u128),
    // Canonical form: only values strictly above u128::MAX live here.
    Big(BigUint),
}

impl Nat {
    pub fn zero() -> Self {
        Nat(Repr::Small(0))
    }

    pub fn one() -> Self {
        Nat(Repr::Small(1))
    }

    fn from_big(value: BigUint) -> Self {
        match value.to_u128() {
            Some(small) => Nat(Repr::Small(small)),
            None => Nat(Repr::Big(value)),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1))
    }

    pub fn is_odd(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => v & 1 == 1,
            Repr::Big(b) => b.bit(0),
        }
    }

    pub fn is_even(&self) -> bool {
        !self.is_odd()
    }

    /// Number of significant bits (0 for zero).
    pub fn bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(v) => (128 - v.leading_zeros()) as u64,
            Repr::Big(b) => b.bits(),
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match &self.0 {
            Repr::Small(v) => u64::try_from(*v).ok(),
            Repr::Big(_) => None,
        }
    }

    pub fn to_u128(&self) -> Option<u128> {
        match &self.0 {
            Repr::Small(v) => Some(*v),
            Repr::Big(_) => None,
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match &self.0 {
            Repr::Small(v) => BigUint::from(*v),
            Repr::Big(b) => b.clone(),
        }
    }

    fn into_biguint(self) -> BigUint {
        match self.0 {
            Repr::Small(v) => BigUint::from(v),
            Repr::Big(b) => b,
        }
    }

    pub fn add(&self, other: &Nat) -> Nat {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_add(*b) {
                Some(v) => Nat(Repr::Small(v)),
                None => Nat(Repr::Big(BigUint::from(*a) + BigUint::from(*b))),
            },
            _ => Nat::from_big(self.to_biguint() + other.to_biguint()),
        }
    }

    pub fn add_u64(&self, rhs: u64) -> Nat {
        match &self.0 {
            Repr::Small(a) => match a.checked_add(rhs as u128) {
                Some(v) => Nat(Repr::Small(v)),
                None => Nat(Repr::Big(BigUint::from(*a) + rhs)),
            },
            Repr::Big(b) => Nat::from_big(b + rhs),
        }
    }

    /// Natural subtraction; `None` when `other > self`.
    pub fn checked_sub(&self, other: &Nat) -> Option<Nat> {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.checked_sub(*b).map(|v| Nat(Repr::Small(v))),
            _ => {
                if self < other {
                    None
                } else {
                    Some(Nat::from_big(self.to_biguint() - other.to_biguint()))
                }
            }
        }
    }

    pub fn checked_sub_u64(&self, rhs: u64) -> Option<Nat> {
        match &self.0 {
            Repr::Small(a) => a.checked_sub(rhs as u128).map(|v| Nat(Repr::Small(v))),
            // A canonical big value exceeds u128::MAX, so subtracting a word
            // cannot underflow or force a demotion below the threshold.
            Repr::Big(b) => Some(Nat::from_big(b - rhs)),
        }
    }

    pub fn mul(&self, other: &Nat) -> Nat {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_mul(*b) {
                Some(v) => Nat(Repr::Small(v)),
                None => Nat(Repr::Big(BigUint::from(*a) * BigUint::from(*b))),
            },
            _ => Nat::from_big(self.to_biguint() * other.to_biguint()),
        }
    }

    pub fn mul_u64(&self, rhs: u64) -> Nat {
        match &self.0 {
            Repr::Small(a) => match a.checked_mul(rhs as u128) {
                Some(v) => Nat(Repr::Small(v)),
                None => Nat(Repr::Big(BigUint::from(*a) * rhs)),
            },
            Repr::Big(b) => Nat::from_big(b * rhs),
        }
    }

    /// `3·self + 1`, the odd branch of the Collatz map.
    pub fn times3_plus1(&self) -> Nat {
        match &self.0 {
            Repr::Small(v) => match v.checked_mul(3).and_then(|t| t.checked_add(1)) {
                Some(t) => Nat(Repr::Small(t)),
                None => Nat(Repr::Big(BigUint::from(*v) * 3u32 + 1u32)),
            },
            Repr::Big(b) => Nat::from_big(b * 3u32 + 1u32),
        }
    }

    pub fn shl(&self, shift: u32) -> Nat {
        match &self.0 {
            Repr::Small(v) => {
                if *v == 0 {
                    Nat::zero()
                } else if shift < 128 && v.leading_zeros() >= shift {
                    Nat(Repr::Small(v << shift))
                } else {
                    Nat(Repr::Big(BigUint::from(*v) << shift))
                }
            }
            Repr::Big(b) => Nat(Repr::Big(b << shift)),
        }
    }

    pub fn shr(&self, shift: u32) -> Nat {
        match &self.0 {
            Repr::Small(v) => {
                if shift >= 128 {
                    Nat::zero()
                } else {
                    Nat(Repr::Small(v >> shift))
                }
            }
            Repr::Big(b) => Nat::from_big(b >> shift),
        }
    }

    /// 2-adic valuation: the exponent of the largest power of two dividing
    /// `self`. Panics on zero, which has no finite valuation.
    pub fn val2(&self) -> u32 {
        match &self.0 {
            Repr::Small(v) => {
                assert!(*v != 0, "2-adic valuation of zero is undefined");
                v.trailing_zeros()
            }
            Repr::Big(b) => b
                .trailing_zeros()
                .expect("canonical big value is nonzero")
                .try_into()
                .expect("valuation exceeds u32"),
        }
    }

    pub fn mod3(&self) -> u8 {
        match &self.0 {
            Repr::Small(v) => (v % 3) as u8,
            Repr::Big(b) => (b % 3u32).to_u8().expect("residue below 3"),
        }
    }

    pub fn mod_u64(&self, modulus: u64) -> u64 {
        assert!(modulus != 0, "modulus must be nonzero");
        match &self.0 {
            Repr::Small(v) => (v % modulus as u128) as u64,
            Repr::Big(b) => (b % modulus).to_u64().expect("residue fits u64"),
        }
    }

    /// Exact division by a small divisor; `None` when it does not divide.
    pub fn div_exact_u64(&self, divisor: u64) -> Option<Nat> {
        assert!(divisor != 0, "divisor must be nonzero");
        match &self.0 {
            Repr::Small(v) => {
                let d = divisor as u128;
                (v % d == 0).then(|| Nat(Repr::Small(v / d)))
            }
            Repr::Big(b) => ((b % divisor).is_zero()).then(|| Nat::from_big(b / divisor)),
        }
    }

    /// `2^exp`.
    pub fn pow2(exp: u32) -> Nat {
        Nat::one().shl(exp)
    }

    /// `3^exp`.
    pub fn pow3(exp: u32) -> Nat {
        // 3^80 still fits in u128.
        if exp <= 80 {
            Nat(Repr::Small(3u128.pow(exp)))
        } else {
            Nat(Repr::Big(BigUint::from(3u32).pow(exp)))
        }
    }
}

impl PartialOrd for Nat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Nat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            (Repr::Big(a), Repr::Big(b)) => a.cmp(b),
            // Canonical form: big always exceeds small.
            (Repr::Small(_), Repr::Big(_)) => Ordering::Less,
            (Repr::Big(_), Repr::Small(_)) => Ordering::Greater,
        }
    }
}

impl From<u32> for Nat {
    fn from(v: u32) -> Self {
        Nat(Repr::Small(v as u128))
    }
}

impl From<u64> for Nat {
    fn from(v: u64) -> Self {
        Nat(Repr::Small(v as u128))
    }
}

impl From<u128> for Nat {
    fn from(v: u128) -> Self {
        Nat(Repr::Small(v))
    }
}

impl From<usize> for Nat {
    fn from(v: usize) -> Self {
        Nat(Repr::Small(v as u128))
    }
}

impl From<BigUint> for Nat {
    fn from(v: BigUint) -> Self {
        Nat::from_big(v)
    }
}

impl From<Nat> for BigUint {
    fn from(v: Nat) -> Self {
        v.into_biguint()
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for Nat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::ParseNat(s.to_owned()));
        }
        if s.len() <= 38 {
            if let Ok(v) = s.parse::<u128>() {
                return Ok(Nat(Repr::Small(v)));
            }
        }
        s.parse::<BigUint>()
            .map(Nat::from_big)
            .map_err(|_| Error::ParseNat(s.to_owned()))
    }
}

impl Serialize for Nat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Nat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        raw.parse().map_err(de::Error::custom)
    }
}

/// Odd positive integer: the domain of the Syracuse map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddNat(Nat);

impl OddNat {
    pub fn new(value: Nat) -> Result<Self, Error> {
        if value.is_zero() {
            return Err(Error::Zero);
        }
        if !value.is_odd() {
            return Err(Error::NotOdd(value));
        }
        Ok(OddNat(value))
    }

    pub fn one() -> Self {
        OddNat(Nat::one())
    }

    pub fn from_u64(v: u64) -> Result<Self, Error> {
        OddNat::new(Nat::from(v))
    }

    pub fn from_u128(v: u128) -> Result<Self, Error> {
        OddNat::new(Nat::from(v))
    }

    pub fn get(&self) -> &Nat {
        &self.0
    }

    pub fn into_nat(self) -> Nat {
        self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl AsRef<Nat> for OddNat {
    fn as_ref(&self) -> &Nat {
        &self.0
    }
}

impl From<OddNat> for Nat {
    fn from(v: OddNat) -> Self {
        v.0
    }
}

impl TryFrom<Nat> for OddNat {
    type Error = Error;

    fn try_from(value: Nat) -> Result<Self, Self::Error> {
        OddNat::new(value)
    }
}

impl fmt::Display for OddNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for OddNat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OddNat::new(s.parse()?)
    }
}

impl Serialize for OddNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OddNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        OddNat::new(Nat::deserialize(deserializer)?).map_err(de::Error::custom)
    }
}
