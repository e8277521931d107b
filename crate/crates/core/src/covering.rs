//! Positive covering property: every negative-coefficient exponent must be
//! a sum of positive-coefficient exponents, for `f` and for its reverse.
//!
//! Reachability uses unbounded repetition of parts `>= 1`; for targets up
//! to the degree `d` this is the same as the `d`-fold iterated sumset.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoveringReason {
    /// Constant coefficient of this side is not positive.
    HypothesisSign,
    /// Some negative index is not a sum of positive-support exponents.
    Uncovered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneSidedCovering {
    pub covered: bool,
    pub reason: Option<CoveringReason>,
    pub uncovered: BTreeSet<u64>,
    /// Covered negative index -> ascending parts from `S^+ \ {0}`.
    pub witnesses: BTreeMap<u64, Vec<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalWeight {
    Finite(u64),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    pub one_sided_forward: bool,
    pub one_sided_reverse: bool,
    pub two_sided: bool,
    pub forward: OneSidedCovering,
    pub reverse: OneSidedCovering,
    /// Uncovered indices of `f` (forward side).
    pub uncovered_indices: BTreeSet<u64>,
    pub witnesses: BTreeMap<u64, Vec<u64>>,
    pub weights: BTreeMap<u64, u64>,
    /// `None` when the forward side is not covered.
    pub global_weight: Option<GlobalWeight>,
}

/// Max-part decompositions over a fixed part set, for all targets up to a bound.
pub struct SumsetTable {
    parts: Vec<u64>,
    // best[i][v]: max number of parts summing to v using only parts[i..].
    best: Vec<Vec<Option<u32>>>,
}

impl SumsetTable {
    pub fn new(parts: &BTreeSet<u64>, max_target: u64) -> Self {
        let parts: Vec<u64> = parts.iter().copied().filter(|&p| p > 0).collect();
        let n = max_target as usize;
        let mut best = vec![vec![None; n + 1]; parts.len() + 1];
        for row in best.iter_mut() {
            row[0] = Some(0);
        }
        for i in (0..parts.len()).rev() {
            let p = parts[i] as usize;
            for v in 1..=n {
                let skip = best[i + 1][v];
                let take = if v >= p {
                    best[i][v - p].map(|t| t + 1)
                } else {
                    None
                };
                best[i][v] = skip.max(take);
            }
        }
        Self { parts, best }
    }

    pub fn reachable(&self, v: u64) -> bool {
        self.weight(v).is_some()
    }

    pub fn weight(&self, v: u64) -> Option<u32> {
        self.best.first()?.get(v as usize).copied().flatten()
    }

    /// Lexicographically smallest ascending part list among the maximizers.
    pub fn decomposition(&self, v: u64) -> Option<Vec<u64>> {
        let mut need = self.weight(v)?;
        let mut rem = v as usize;
        let mut i = 0;
        let mut out = Vec::with_capacity(need as usize);
        while rem > 0 {
            let mut chosen = None;
            for j in i..self.parts.len() {
                let p = self.parts[j] as usize;
                if p > rem {
                    break;
                }
                if self.best[j][rem - p] == Some(need - 1) {
                    chosen = Some(j);
                    break;
                }
            }
            let j = chosen.expect("table is consistent");
            out.push(self.parts[j]);
            rem -= self.parts[j] as usize;
            need -= 1;
            i = j;
        }
        Some(out)
    }
}

fn check_hypothesis(f: &SparsePolynomial) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Input("covering check on the zero polynomial".into()));
    }
    Ok(f.coeff(0).is_positive())
}

pub fn one_sided_covering(f: &SparsePolynomial) -> Result<OneSidedCovering> {
    if !check_hypothesis(f)? {
        return Ok(OneSidedCovering {
            covered: false,
            reason: Some(CoveringReason::HypothesisSign),
            uncovered: BTreeSet::new(),
            witnesses: BTreeMap::new(),
        });
    }
    let profile = f.support_profile();
    let table = SumsetTable::new(&profile.s_plus, f.degree().unwrap());
    let mut uncovered = BTreeSet::new();
    let mut witnesses = BTreeMap::new();
    for &k in &profile.s_minus {
        match table.decomposition(k) {
            Some(parts) => {
                witnesses.insert(k, parts);
            }
            None => {
                uncovered.insert(k);
            }
        }
    }
    let covered = uncovered.is_empty();
    Ok(OneSidedCovering {
        covered,
        reason: (!covered).then_some(CoveringReason::Uncovered),
        uncovered,
        witnesses,
    })
}

/// `w_f(k)` and one maximizing decomposition (ascending).
pub fn weight_of_index(f: &SparsePolynomial, k: u64) -> Result<(u64, Vec<u64>)> {
    let profile = f.support_profile();
    let table = SumsetTable::new(&profile.s_plus, k);
    match table.decomposition(k) {
        Some(parts) if k > 0 => Ok((parts.len() as u64, parts)),
        _ => Err(Error::NotCoverable(k)),
    }
}

pub fn global_weight(f: &SparsePolynomial) -> Result<GlobalWeight> {
    if f.is_zero() {
        return Err(Error::Input("weight of the zero polynomial".into()));
    }
    let profile = f.support_profile();
    if profile.s_minus.is_empty() {
        return Ok(GlobalWeight::Unbounded);
    }
    let table = SumsetTable::new(&profile.s_plus, f.degree().unwrap());
    let mut best = u64::MAX;
    for &k in &profile.s_minus {
        let w = table
            .weight(k)
            .filter(|_| k > 0)
            .ok_or(Error::NotCoverable(k))?;
        best = best.min(w as u64);
    }
    Ok(GlobalWeight::Finite(best))
}

pub fn covering_report(f: &SparsePolynomial) -> Result<CoveringReport> {
    let forward = one_sided_covering(f)?;
    let reverse = one_sided_covering(&f.reverse()?)?;
    let weights: BTreeMap<u64, u64> = forward
        .witnesses
        .iter()
        .map(|(&k, parts)| (k, parts.len() as u64))
        .collect();
    let global_weight = if forward.covered {
        Some(match weights.values().min() {
            Some(&w) => GlobalWeight::Finite(w),
            None => GlobalWeight::Unbounded,
        })
    } else {
        None
    };
    Ok(CoveringReport {
        one_sided_forward: forward.covered,
        one_sided_reverse: reverse.covered,
        two_sided: forward.covered && reverse.covered,
        uncovered_indices: forward.uncovered.clone(),
        witnesses: forward.witnesses.clone(),
        weights,
        global_weight,
        forward,
        reverse,
    })
}
