//! The decision procedure: reduce to the primitive core `g`, screen the
//! boundary signs, check covering on both sides, then strong positivity.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::covering::{covering_report, CoveringReport};
use crate::error::{Error, Result};
use crate::poly::{pow_rat, PrimitiveDecomposition, SparsePolynomial};
use crate::powers::{coefficient_exact, profile, threshold_search, ThresholdResult};
use crate::rational::Rat;
use crate::strongpos::{
    certify_with, verify_witness, CertifyOptions, Status, StrongPositivityVerdict, Witness,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictStatus {
    EventuallyNonNegative,
    NotEventuallyNonNegative,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Forward,
    Reverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySide {
    Constant,
    Leading,
}

/// The exponent `slope · m + offset` of `f^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PowerIndex {
    pub slope: u64,
    pub offset: i64,
}

impl PowerIndex {
    pub fn at(&self, m: u64) -> u64 {
        (self.slope as i128 * m as i128 + self.offset as i128) as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum NecessityWitness {
    /// `[z^k] g^m = m b_0^{m-1} b_k < 0` on the failing side.
    CoveringFailure {
        side: Side,
        /// Uncovered index of `g` (or of its reverse).
        k: u64,
        index: PowerIndex,
        #[serde(with = "crate::rational::serde_rat")]
        b0: Rat,
        #[serde(with = "crate::rational::serde_rat")]
        bk: Rat,
    },
    /// `|g(z)| > g(|z|)` at a point of the core.
    StrongPositivityFailure { witness: Witness },
    /// Negative constant or leading coefficient of `g`.
    SignFailure {
        side: BoundarySide,
        #[serde(with = "crate::rational::serde_rat")]
        coefficient: Rat,
        index: PowerIndex,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Empirical {
    pub threshold: ThresholdResult,
    pub window: Option<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationVerdict {
    pub schema_version: &'static str,
    pub status: VerdictStatus,
    pub input: String,
    /// `f = z^k g(z^l)`.
    pub k: u64,
    pub l: u64,
    pub core: String,
    pub covering: Option<CoveringReport>,
    pub strong_positivity: Option<StrongPositivityVerdict>,
    pub witness: Option<NecessityWitness>,
    pub de_angelis: Option<bool>,
    /// De Angelis boundary condition plus certified strong positivity.
    pub eventually_positive: bool,
    pub empirical: Option<Empirical>,
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    pub certify: CertifyOptions,
    /// Attach `threshold_search(f, m_max)` when set.
    pub empirical_m_max: Option<u64>,
}

/// `a_0, a_1, a_{d-1}, a_d > 0`.
pub fn de_angelis_check(f: &SparsePolynomial) -> bool {
    let Some(d) = f.degree() else { return false };
    if d < 2 {
        return false;
    }
    [0, 1, d - 1, d].iter().all(|&i| f.coeff(i).is_positive())
}

/// Constants are outside the main theorem: a negative constant alternates
/// in sign, a positive one stays positive.
fn constant_verdict(f: &SparsePolynomial) -> ClassificationVerdict {
    let c = f.coeff(0);
    let negative = c.is_negative();
    ClassificationVerdict {
        schema_version: SCHEMA_VERSION,
        status: if negative {
            VerdictStatus::NotEventuallyNonNegative
        } else {
            VerdictStatus::EventuallyNonNegative
        },
        input: f.to_string(),
        k: 0,
        l: 1,
        core: f.to_string(),
        covering: None,
        strong_positivity: None,
        witness: negative.then(|| NecessityWitness::SignFailure {
            side: BoundarySide::Constant,
            coefficient: c,
            index: PowerIndex {
                slope: 0,
                offset: 0,
            },
        }),
        de_angelis: None,
        eventually_positive: false,
        empirical: None,
    }
}

pub fn classify(f: &SparsePolynomial) -> Result<ClassificationVerdict> {
    classify_with(f, &ClassifyOptions::default())
}

pub fn classify_with(
    f: &SparsePolynomial,
    opts: &ClassifyOptions,
) -> Result<ClassificationVerdict> {
    if f.is_zero() {
        return Err(Error::Input("cannot classify the zero polynomial".into()));
    }
    if f.is_constant() {
        return Ok(constant_verdict(f));
    }
    let dec = f.primitive_decompose()?;
    let (big_k, l, g) = (dec.shift_k, dec.stride_l, &dec.core_g);
    let dg = g.degree().unwrap();
    let mut verdict = ClassificationVerdict {
        schema_version: SCHEMA_VERSION,
        status: VerdictStatus::Inconclusive,
        input: f.to_string(),
        k: big_k,
        l,
        core: g.to_string(),
        covering: None,
        strong_positivity: None,
        witness: None,
        de_angelis: f.degree().filter(|&d| d >= 2).map(|_| de_angelis_check(f)),
        eventually_positive: false,
        empirical: None,
    };
    if let Some(m_max) = opts.empirical_m_max {
        let threshold = threshold_search(f, m_max)?;
        verdict.empirical = Some(Empirical {
            window: threshold.window,
            threshold,
        });
    }

    let b0 = g.coeff(0);
    let bd = g.leading_coeff().unwrap().clone();
    if b0.is_negative() {
        verdict.status = VerdictStatus::NotEventuallyNonNegative;
        verdict.witness = Some(NecessityWitness::SignFailure {
            side: BoundarySide::Constant,
            coefficient: b0,
            index: PowerIndex {
                slope: big_k,
                offset: 0,
            },
        });
        return Ok(verdict);
    }
    if dg == 0 {
        verdict.status = VerdictStatus::EventuallyNonNegative;
        return Ok(verdict);
    }
    if bd.is_negative() {
        verdict.status = VerdictStatus::NotEventuallyNonNegative;
        verdict.witness = Some(NecessityWitness::SignFailure {
            side: BoundarySide::Leading,
            coefficient: bd,
            index: PowerIndex {
                slope: big_k + l * dg,
                offset: 0,
            },
        });
        return Ok(verdict);
    }

    let cov = covering_report(g)?;
    let sp = certify_with(g, &opts.certify)?;
    let covering_witness = if let Some(k) = cov.forward.uncovered.first().copied() {
        Some(NecessityWitness::CoveringFailure {
            side: Side::Forward,
            k,
            index: PowerIndex {
                slope: big_k,
                offset: (l * k) as i64,
            },
            b0: b0.clone(),
            bk: g.coeff(k),
        })
    } else {
        cov.reverse
            .uncovered
            .first()
            .map(|&k| NecessityWitness::CoveringFailure {
                side: Side::Reverse,
                k,
                index: PowerIndex {
                    slope: big_k + l * dg,
                    offset: -((l * k) as i64),
                },
                b0: bd.clone(),
                bk: g.coeff(dg - k),
            })
    };
    // a point witness covers every odd m, so it is preferred when both exist
    let point_witness = match (&sp.status, &sp.witness) {
        (Status::Refuted, Some(w)) if !w.equality => {
            Some(NecessityWitness::StrongPositivityFailure { witness: w.clone() })
        }
        (Status::Refuted, _) => {
            debug_assert!(false, "equality witness on a primitive core");
            None
        }
        _ => None,
    };
    verdict.witness = point_witness.or(covering_witness);
    verdict.status = match (&verdict.witness, sp.status) {
        (Some(_), _) => VerdictStatus::NotEventuallyNonNegative,
        (None, Status::Certified) => VerdictStatus::EventuallyNonNegative,
        (None, _) => VerdictStatus::Inconclusive,
    };
    verdict.eventually_positive =
        verdict.status == VerdictStatus::EventuallyNonNegative && verdict.de_angelis == Some(true);
    verdict.covering = Some(cov);
    verdict.strong_positivity = Some(sp);
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranscriptEntry {
    pub m: u64,
    /// Exponent in `f^m`.
    pub index: u64,
    #[serde(with = "crate::rational::serde_rat")]
    pub value: Rat,
    pub negative: bool,
    /// Value equals the closed form for this witness kind.
    pub matches_formula: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transcript {
    pub claim: String,
    pub entries: Vec<TranscriptEntry>,
    /// Exact re-check of a point witness.
    pub point_verified: Option<bool>,
    pub verified: bool,
}

pub const TRANSCRIPT_M_MAX: u64 = 40;
pub const ODD_M_MAX: u64 = 21;

/// Exact evidence that `f` is not eventually non-negative.
pub fn necessity_witness(
    f: &SparsePolynomial,
    verdict: &ClassificationVerdict,
) -> Result<Transcript> {
    if verdict.status != VerdictStatus::NotEventuallyNonNegative {
        return Err(Error::Precondition(
            "transcript needs a NotEventuallyNonNegative verdict".into(),
        ));
    }
    let witness = verdict
        .witness
        .as_ref()
        .ok_or_else(|| Error::Precondition("verdict carries no witness".into()))?;
    let dec = if f.is_constant() {
        PrimitiveDecomposition {
            shift_k: 0,
            stride_l: 1,
            core_g: f.clone(),
        }
    } else {
        f.primitive_decompose()?
    };
    let g = &dec.core_g;
    let dg = g.degree().unwrap();
    let mut entries = Vec::new();
    let transcript = match witness {
        NecessityWitness::CoveringFailure {
            side,
            k,
            index,
            b0,
            bk,
        } => {
            let core_index = |m: u64| match side {
                Side::Forward => *k,
                Side::Reverse => dg * m - k,
            };
            for m in 1..=TRANSCRIPT_M_MAX {
                let value = coefficient_exact(g, core_index(m), m)?;
                let formula = Rat::from_integer(BigInt::from(m)) * pow_rat(b0, m - 1) * bk;
                entries.push(TranscriptEntry {
                    m,
                    index: index.at(m),
                    negative: value.is_negative(),
                    matches_formula: value == formula,
                    value,
                });
            }
            let verified = entries.iter().all(|e| e.negative && e.matches_formula);
            Transcript {
                claim: format!(
                    "[z^({}m{:+})] f^m = m b0^(m-1) b_k < 0 for m in [1, {TRANSCRIPT_M_MAX}]",
                    index.slope, index.offset
                ),
                entries,
                point_verified: None,
                verified,
            }
        }
        NecessityWitness::SignFailure {
            side,
            coefficient,
            index,
        } => {
            for m in 1..=TRANSCRIPT_M_MAX {
                let core_index = match side {
                    BoundarySide::Constant => 0,
                    BoundarySide::Leading => dg * m,
                };
                let value = coefficient_exact(g, core_index, m)?;
                let formula = pow_rat(coefficient, m);
                entries.push(TranscriptEntry {
                    m,
                    index: index.at(m),
                    negative: value.is_negative(),
                    matches_formula: value == formula,
                    value,
                });
            }
            let verified = entries
                .iter()
                .all(|e| e.matches_formula && (e.m % 2 == 0 || e.negative));
            Transcript {
                claim: format!("boundary coefficient c < 0, so c^m < 0 for every odd m in [1, {TRANSCRIPT_M_MAX}]"),
                entries,
                point_verified: None,
                verified,
            }
        }
        NecessityWitness::StrongPositivityFailure { witness } => {
            let point = verify_witness(g, witness);
            for m in (1..=ODD_M_MAX).step_by(2) {
                let p = profile(g, m)?;
                let (index, value) = match p.first_negative {
                    Some(n) => (n, p.coefficient(n)),
                    None => (0, p.coefficient(0)),
                };
                entries.push(TranscriptEntry {
                    m,
                    index: dec.shift_k * m + dec.stride_l * index,
                    negative: value.is_negative(),
                    matches_formula: value.is_negative(),
                    value,
                });
            }
            let verified = point && entries.iter().all(|e| e.negative);
            Transcript {
                claim: format!(
                    "|g(z)| > g(|z|) at z = {:.6}{:+.6}i, so g^m has a negative coefficient for every odd m; checked m <= {ODD_M_MAX}",
                    witness.z_re, witness.z_im
                ),
                entries,
                point_verified: Some(point),
                verified,
            }
        }
    };
    Ok(transcript)
}

/// Recomputes the value of `[z^index] f^m` directly from `f`.
pub fn coefficient_at(f: &SparsePolynomial, index: PowerIndex, m: u64) -> Result<Rat> {
    let n = index.slope as i128 * m as i128 + index.offset as i128;
    if n < 0 {
        return Ok(Rat::zero());
    }
    coefficient_exact(f, n as u64, m)
}
