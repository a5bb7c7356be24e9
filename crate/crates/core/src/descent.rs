//! Constructive descent evidence for the case analysis.
//!
//! Cases 1 and 2 admit a smaller odd integer linked to `k` through `f`;
//! cases 3 and 4 come with candidate preimage formulas `m = (4k−1)/3` and
//! `r = (4m−1)/3` whose integrality is checked, not assumed; cases 5 and 6
//! have no `f`-preimage at all, which [`preimages`] witnesses by bounded
//! enumeration on top of the mod-3 obstruction.
//!
//! Every relation stored in a witness is re-verified by actually applying
//! [`f_step`]; a formula bug surfaces as a verification failure instead of
//! silently corrupting downstream results.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::classify::{classify, CaseKind, CaseTag};
use crate::decompose::{decompose, Decomposition};
use crate::error::{Error, Result};
use crate::map::{f_iterate, f_step};
use crate::nat::{Nat, OddNat};

/// How a witness value relates to the rest of its chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkRelation {
    /// `f(witness) = k` where `k` is the anchor.
    MapsToAnchor,
    /// `f(k) = witness`.
    AnchorMapsTo,
    /// `f(witness)` equals the previous witness in the chain.
    MapsToPrevious,
}

/// A witness value with its re-verified `f` relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessLink {
    pub witness: OddNat,
    pub relation: LinkRelation,
    /// Valuation `n` in `3x + 1 = 2^n · f(x)` for the verified relation.
    #[serde(with = "crate::serde_util::int_string")]
    pub valuation: u32,
}

/// Exact divisibility verdict for a witness formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrality {
    Integral(OddNat),
    /// The formula does not produce an integer; the exact rational is kept.
    NonIntegral {
        numerator: Nat,
        #[serde(with = "crate::serde_util::int_string")]
        denominator: u32,
    },
}

impl Integrality {
    pub fn as_integral(&self) -> Option<&OddNat> {
        match self {
            Integrality::Integral(v) => Some(v),
            Integrality::NonIntegral { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralityRecord {
    pub formula: String,
    pub verdict: Integrality,
}

/// Order of a witness relative to the anchor `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Less,
    Equal,
    Greater,
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessComparison {
    pub witness: OddNat,
    pub versus_anchor: Comparison,
}

/// Per-case constructive evidence around an anchor `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentWitness {
    pub case: CaseTag,
    pub anchor: OddNat,
    pub chain: Vec<WitnessLink>,
    pub integrality: Vec<IntegralityRecord>,
    pub comparisons: Vec<WitnessComparison>,
}

/// All odd `m` with `3m + 1 = 2^s·k` for `1 ≤ s ≤ s_max`.
///
/// The solution set is infinite for `k ≢ 0 (mod 3)`, so the enumeration is
/// bounded by construction. For `k ≡ 0 (mod 3)` it is empty at every bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageSet {
    pub k: OddNat,
    #[serde(with = "crate::serde_util::int_string")]
    pub s_max: u32,
    pub members: Vec<Preimage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preimage {
    pub m: OddNat,
    #[serde(with = "crate::serde_util::int_string")]
    pub valuation: u32,
}

/// Outcome of the exact identity check `16k = 9r + 7`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub k: OddNat,
    pub r: OddNat,
    /// `16k`
    pub lhs: Nat,
    /// `9r + 7`
    pub rhs: Nat,
    pub r_versus_k: Comparison,
}

/// Dispatch result of [`descend`]: either constructive evidence or the
/// nonexistence record for cases 5 and 6.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DescentOutcome {
    Witness(DescentWitness),
    NoPredecessor(NoPredecessorEvidence),
}

/// Evidence that no odd `m` with `f(m) = k` exists: `k ≡ 0 (mod 3)` makes
/// `2^s·k − 1 ≡ 2 (mod 3)` for every `s`, and a bounded scan confirms it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoPredecessorEvidence {
    pub k: OddNat,
    pub case: CaseTag,
    #[serde(with = "crate::serde_util::int_string")]
    pub k_mod3: u8,
    #[serde(with = "crate::serde_util::int_string")]
    pub scanned_s_max: u32,
    #[serde(with = "crate::serde_util::int_string")]
    pub preimages_found: u64,
}

/// Valuation bound used by [`descend`] when scanning for preimages that the
/// modular argument says cannot exist.
pub const NO_PREIMAGE_SCAN_BOUND: u32 = 64;

fn expect_case(k: &OddNat, wanted: &'static str, kinds: &[CaseKind]) -> Result<CaseTag> {
    let tag = classify(k)?;
    if kinds.contains(&tag.kind()) {
        Ok(tag)
    } else {
        Err(Error::WrongCase {
            expected: wanted,
            found: tag.kind().name(),
        })
    }
}

/// Case 1 (`p = 1`): one application of `f` already descends. The witness is
/// `f(k)` with the observed order recorded.
pub fn case1_witness(k: &OddNat) -> Result<DescentWitness> {
    let tag = expect_case(k, "Case1", &[CaseKind::Case1])?;
    let step = f_step(k);
    let comparison = Comparison::from(step.next.cmp(k));
    Ok(DescentWitness {
        case: tag,
        anchor: k.clone(),
        chain: vec![WitnessLink {
            witness: step.next.clone(),
            relation: LinkRelation::AnchorMapsTo,
            valuation: step.valuation,
        }],
        integrality: Vec::new(),
        comparisons: vec![WitnessComparison {
            witness: step.next,
            versus_anchor: comparison,
        }],
    })
}

/// Case 2 (`h = 3·h̄`): the smaller `k̄ = 2^{p+1}·h̄ − 1` satisfies `f(k̄) = k`.
pub fn case2_predecessor(k: &OddNat) -> Result<DescentWitness> {
    let tag = expect_case(k, "Case2", &[CaseKind::Case2])?;
    let hbar = tag.hbar().expect("Case2 carries hbar").clone();
    let d = decompose(k);
    let kbar_nat = hbar
        .get()
        .shl(d.p() + 1)
        .checked_sub_u64(1)
        .expect("2^{p+1}·hbar >= 2");
    let kbar = OddNat::new(kbar_nat).expect("2^{p+1}·hbar - 1 is odd");
    let step = f_step(&kbar);
    if &step.next != k {
        return Err(Error::RelationViolation {
            context: format!("f({kbar}) = {} but the anchor is {k}", step.next),
        });
    }
    let comparison = Comparison::from(kbar.cmp(k));
    Ok(DescentWitness {
        case: tag,
        anchor: k.clone(),
        chain: vec![WitnessLink {
            witness: kbar.clone(),
            relation: LinkRelation::MapsToAnchor,
            valuation: step.valuation,
        }],
        integrality: Vec::new(),
        comparisons: vec![WitnessComparison {
            witness: kbar,
            versus_anchor: comparison,
        }],
    })
}

fn quarter_minus_one_over_3(x: &OddNat) -> (Nat, Option<OddNat>) {
    let numerator = x
        .get()
        .shl(2)
        .checked_sub_u64(1)
        .expect("4x >= 4 for positive x");
    let value = numerator
        .div_exact_u64(3)
        .map(|q| OddNat::new(q).expect("(4x-1)/3 is odd when integral: 4x-1 is odd"));
    (numerator, value)
}

/// Cases 3 and 4: `m = (4k−1)/3`, an odd integer with `f(m) = k` at
/// valuation exactly 2. Divisibility is asserted, not assumed.
pub fn case34_m(k: &OddNat) -> Result<OddNat> {
    expect_case(k, "Case3 or Case4", &[CaseKind::Case3, CaseKind::Case4])?;
    let (numerator, m) = quarter_minus_one_over_3(k);
    let m = m.ok_or(Error::DivisibilityViolation {
        numerator,
        divisor: 3,
    })?;
    let step = f_step(&m);
    if &step.next != k || step.valuation != 2 {
        return Err(Error::RelationViolation {
            context: format!(
                "expected f({m}) = ({k}, valuation 2), found ({}, valuation {})",
                step.next, step.valuation
            ),
        });
    }
    Ok(m)
}

/// The second-stage formula `r = (4m−1)/3`. Non-integrality is a legal,
/// reportable outcome carrying the exact rational; when integral, `f(r) = m`
/// at valuation 2 is re-verified.
pub fn case34_r(m: &OddNat) -> Result<Integrality> {
    let (numerator, r) = quarter_minus_one_over_3(m);
    match r {
        None => Ok(Integrality::NonIntegral {
            numerator,
            denominator: 3,
        }),
        Some(r) => {
            let step = f_step(&r);
            if &step.next != m || step.valuation != 2 {
                return Err(Error::RelationViolation {
                    context: format!(
                        "expected f({r}) = ({m}, valuation 2), found ({}, valuation {})",
                        step.next, step.valuation
                    ),
                });
            }
            Ok(Integrality::Integral(r))
        }
    }
}

/// Checks the exact identity `16k = 9r + 7` and reports the observed order
/// of `r` and `k`. The identity failing on inputs produced by [`case34_m`]
/// and [`case34_r`] would signal an implementation bug.
pub fn case34_identity_check(k: &OddNat, r: &OddNat) -> Result<IdentityReport> {
    let lhs = k.get().shl(4);
    let rhs = r.get().mul_u64(9).add_u64(7);
    if lhs != rhs {
        return Err(Error::IdentityViolation { lhs, rhs });
    }
    Ok(IdentityReport {
        k: k.clone(),
        r: r.clone(),
        lhs,
        rhs,
        r_versus_k: Comparison::from(r.cmp(k)),
    })
}

/// Full cases-3/4 evidence: the `m` witness, the `r` integrality verdict,
/// and the observed orders.
pub fn case34_witness(k: &OddNat) -> Result<DescentWitness> {
    let tag = expect_case(k, "Case3 or Case4", &[CaseKind::Case3, CaseKind::Case4])?;
    let m = case34_m(k)?;
    let r_verdict = case34_r(&m)?;

    let mut chain = vec![WitnessLink {
        witness: m.clone(),
        relation: LinkRelation::MapsToAnchor,
        valuation: 2,
    }];
    let mut comparisons = vec![WitnessComparison {
        witness: m.clone(),
        versus_anchor: Comparison::from(m.cmp(k)),
    }];
    if let Some(r) = r_verdict.as_integral() {
        chain.push(WitnessLink {
            witness: r.clone(),
            relation: LinkRelation::MapsToPrevious,
            valuation: 2,
        });
        comparisons.push(WitnessComparison {
            witness: r.clone(),
            versus_anchor: Comparison::from(r.cmp(k)),
        });
    }
    Ok(DescentWitness {
        case: tag,
        anchor: k.clone(),
        chain,
        integrality: vec![
            IntegralityRecord {
                formula: "m = (4k-1)/3".into(),
                verdict: Integrality::Integral(m),
            },
            IntegralityRecord {
                formula: "r = (4m-1)/3".into(),
                verdict: r_verdict,
            },
        ],
        comparisons,
    })
}

/// Enumerates every odd `m` with `3m + 1 = 2^s·k`, `1 ≤ s ≤ s_max`.
/// Each member is re-verified through `f`.
pub fn preimages(k: &OddNat, s_max: u32) -> Result<PreimageSet> {
    let mut members = Vec::new();
    for s in 1..=s_max {
        let numerator = k
            .get()
            .shl(s)
            .checked_sub_u64(1)
            .expect("2^s·k >= 2 for s >= 1");
        if let Some(q) = numerator.div_exact_u64(3) {
            let m = OddNat::new(q).expect("(2^s·k - 1)/3 is odd: the numerator is odd");
            let step = f_step(&m);
            if &step.next != k || step.valuation != s {
                return Err(Error::RelationViolation {
                    context: format!(
                        "expected f({m}) = ({k}, valuation {s}), found ({}, valuation {})",
                        step.next, step.valuation
                    ),
                });
            }
            members.push(Preimage { m, valuation: s });
        }
    }
    Ok(PreimageSet {
        k: k.clone(),
        s_max,
        members,
    })
}

/// Closed form for the first `p − 1` iterates of `k = 2^p·h − 1`:
/// `f^n(k) = 3^n·2^{p−n}·h − 1` for `1 ≤ n ≤ p − 1`. The returned value is
/// checked against actually iterating `f`.
pub fn expansion(d: &Decomposition, n: u32) -> Result<OddNat> {
    let p = d.p();
    if n == 0 || n >= p {
        return Err(Error::ExponentOutOfRange { n, p });
    }
    let value = Nat::pow3(n)
        .mul(&d.h().get().shl(p - n))
        .checked_sub_u64(1)
        .expect("3^n·2^{p-n}·h >= 2");
    let value = OddNat::new(value).expect("3^n·2^{p-n}·h - 1 is odd for n < p");
    let iterated = f_iterate(d.k(), n as u64);
    if iterated != value {
        return Err(Error::RelationViolation {
            context: format!(
                "expansion of {} at n = {n} gives {value} but f^{n} gives {iterated}",
                d.k()
            ),
        });
    }
    Ok(value)
}

/// The value reached after the expansion phase, in both readings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakValue {
    /// `3^p·h − 1`, an even number.
    pub pre_division: Nat,
    /// Its odd part, which equals `f^p(k)`.
    pub odd_part: OddNat,
    #[serde(with = "crate::serde_util::int_string")]
    pub valuation: u32,
}

/// `3^p·h − 1` and its odd part for a decomposition with `p ≥ 2`.
///
/// The even pre-division value is where the monotone expansion chain ends;
/// dividing out its 2-adic valuation gives the actual iterate `f^p(k)`,
/// and both readings are exposed.
pub fn peak_value(d: &Decomposition) -> Result<PeakValue> {
    let p = d.p();
    if p < 2 {
        return Err(Error::ExponentTooSmall { p, min: 2 });
    }
    let pre_division = Nat::pow3(p)
        .mul(d.h().get())
        .checked_sub_u64(1)
        .expect("3^p·h >= 9");
    let valuation = pre_division.val2();
    let odd_part = OddNat::new(pre_division.shr(valuation)).expect("odd part is odd");
    let iterated = f_iterate(d.k(), p as u64);
    if iterated != odd_part {
        return Err(Error::RelationViolation {
            context: format!(
                "f^{p}({}) = {iterated} but the odd part of 3^{p}·h - 1 is {odd_part}",
                d.k()
            ),
        });
    }
    Ok(PeakValue {
        pre_division,
        odd_part,
        valuation,
    })
}

/// Dispatches on the case of `k`: a constructive witness for cases 1–4,
/// the nonexistence evidence for cases 5 and 6.
pub fn descend(k: &OddNat) -> Result<DescentOutcome> {
    let tag = classify(k)?;
    match tag.kind() {
        CaseKind::Case1 => case1_witness(k).map(DescentOutcome::Witness),
        CaseKind::Case2 => case2_predecessor(k).map(DescentOutcome::Witness),
        CaseKind::Case3 | CaseKind::Case4 => case34_witness(k).map(DescentOutcome::Witness),
        CaseKind::Case5 | CaseKind::Case6 => {
            let scan = preimages(k, NO_PREIMAGE_SCAN_BOUND)?;
            Ok(DescentOutcome::NoPredecessor(NoPredecessorEvidence {
                k: k.clone(),
                case: tag,
                k_mod3: k.get().mod3(),
                scanned_s_max: NO_PREIMAGE_SCAN_BOUND,
                preimages_found: scan.members.len() as u64,
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd(v: u64) -> OddNat {
        OddNat::from_u64(v).unwrap()
    }

    #[test]
    fn case1_examples() {
        for (k, expect) in [(5u64, 1u64), (9, 7), (13, 5)] {
            let w = case1_witness(&odd(k)).unwrap();
            assert_eq!(w.chain[0].witness, odd(expect));
            assert_eq!(w.comparisons[0].versus_anchor, Comparison::Less);
        }
        assert!(case1_witness(&odd(1)).is_err());
        assert!(matches!(
            case1_witness(&odd(7)),
            Err(Error::WrongCase { .. })
        ));
    }

    #[test]
    fn case2_examples() {
        for (k, kbar) in [(11u64, 7u64), (23, 15), (35, 23)] {
            let w = case2_predecessor(&odd(k)).unwrap();
            assert_eq!(w.chain[0].witness, odd(kbar));
            assert_eq!(w.chain[0].relation, LinkRelation::MapsToAnchor);
            assert_eq!(w.comparisons[0].versus_anchor, Comparison::Less);
        }
        assert!(case2_predecessor(&odd(5)).is_err());
    }

    #[test]
    fn case34_m_examples() {
        for (k, m) in [(7u64, 9u64), (19, 25), (55, 73)] {
            assert_eq!(case34_m(&odd(k)).unwrap(), odd(m));
        }
        assert!(case34_m(&odd(11)).is_err());
    }

    #[test]
    fn case34_r_examples() {
        // 4·9 - 1 = 35 is not divisible by 3.
        assert_eq!(
            case34_r(&odd(9)).unwrap(),
            Integrality::NonIntegral {
                numerator: Nat::from(35u64),
                denominator: 3,
            }
        );
        assert_eq!(case34_r(&odd(73)).unwrap(), Integrality::Integral(odd(97)));
        assert_eq!(case34_r(&odd(25)).unwrap(), Integrality::Integral(odd(33)));
    }

    #[test]
    fn identity_examples() {
        let report = case34_identity_check(&odd(55), &odd(97)).unwrap();
        assert_eq!(report.lhs, Nat::from(880u64));
        assert_eq!(report.r_versus_k, Comparison::Greater);
        let report = case34_identity_check(&odd(19), &odd(33)).unwrap();
        assert_eq!(report.lhs, Nat::from(304u64));
        assert_eq!(report.r_versus_k, Comparison::Greater);
        // Boundary of the identity itself.
        let report = case34_identity_check(&odd(1), &odd(1)).unwrap();
        assert_eq!(report.lhs, report.rhs);
        assert_eq!(report.r_versus_k, Comparison::Equal);
        assert!(matches!(
            case34_identity_check(&odd(7), &odd(9)),
            Err(Error::IdentityViolation { .. })
        ));
    }

    #[test]
    fn preimage_examples() {
        assert!(preimages(&odd(3), 20).unwrap().members.is_empty());
        let set = preimages(&odd(1), 6).unwrap();
        assert_eq!(
            set.members,
            vec![
                Preimage {
                    m: odd(1),
                    valuation: 2
                },
                Preimage {
                    m: odd(5),
                    valuation: 4
                },
                Preimage {
                    m: odd(21),
                    valuation: 6
                },
            ]
        );
        let set = preimages(&odd(11), 4).unwrap();
        assert_eq!(
            set.members,
            vec![
                Preimage {
                    m: odd(7),
                    valuation: 1
                },
                Preimage {
                    m: odd(29),
                    valuation: 3
                },
            ]
        );
    }

    #[test]
    fn expansion_examples() {
        let d = decompose(&odd(7));
        assert_eq!(expansion(&d, 1).unwrap(), odd(11));
        assert_eq!(expansion(&d, 2).unwrap(), odd(17));
        assert!(matches!(
            expansion(&d, 3),
            Err(Error::ExponentOutOfRange { .. })
        ));
        assert!(matches!(
            expansion(&d, 0),
            Err(Error::ExponentOutOfRange { .. })
        ));
        let d = decompose(&odd(3));
        assert_eq!(expansion(&d, 1).unwrap(), odd(5));
    }

    #[test]
    fn peak_examples() {
        let pv = peak_value(&decompose(&odd(7))).unwrap();
        assert_eq!(
            (pv.pre_division, pv.odd_part, pv.valuation),
            (Nat::from(26u64), odd(13), 1)
        );
        let pv = peak_value(&decompose(&odd(3))).unwrap();
        assert_eq!(
            (pv.pre_division, pv.odd_part, pv.valuation),
            (Nat::from(8u64), odd(1), 3)
        );
        let pv = peak_value(&decompose(&odd(11))).unwrap();
        assert_eq!(
            (pv.pre_division, pv.odd_part, pv.valuation),
            (Nat::from(26u64), odd(13), 1)
        );
        // p = 1 has no expansion phase.
        assert!(peak_value(&decompose(&odd(5))).is_err());
    }

    #[test]
    fn descend_dispatch() {
        assert!(matches!(
            descend(&odd(5)).unwrap(),
            DescentOutcome::Witness(_)
        ));
        match descend(&odd(3)).unwrap() {
            DescentOutcome::NoPredecessor(ev) => {
                assert_eq!(ev.k_mod3, 0);
                assert_eq!(ev.preimages_found, 0);
            }
            other => panic!("expected nonexistence evidence, got {other:?}"),
        }
    }
}
