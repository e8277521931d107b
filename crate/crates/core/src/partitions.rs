//! Partition expansion of `[z^n] f^m` and the compression map.
//!
//! A partition `λ` of `n` with parts at most `d` is stored as the
//! multiplicity vector `(λ_1, …, λ_d)`. Its contribution is the number of
//! ways to pick which of the `m` factors supply each part, times the
//! coefficients: `C(m, λ_1) C(m - λ_1, λ_2) ⋯ · a_0^{m - Σλ} Π a_i^{λ_i}`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::covering::weight_of_index;
use crate::error::{Error, Result};
use crate::poly::{pow_rat, SparsePolynomial};
use crate::rational::Rat;

/// Partitions of `n` into parts `<= d`, as multiplicity vectors in
/// ascending lexicographic order.
pub struct Partitions {
    n: u64,
    d: usize,
    // feasible[i][r]: r is a sum of parts from {i+1, …, d} (0-based i).
    feasible: Vec<Vec<bool>>,
    current: Option<Vec<u64>>,
    started: bool,
}

pub fn enumerate_partitions(n: u64, d: usize) -> Partitions {
    assert!(d >= 1, "parts bound must be positive");
    let mut feasible = vec![vec![false; n as usize + 1]; d + 1];
    feasible[d][0] = true;
    for i in (0..d).rev() {
        let part = i + 1;
        for r in 0..=n as usize {
            feasible[i][r] = (0..=r / part).any(|l| feasible[i + 1][r - l * part]);
        }
    }
    Partitions {
        n,
        d,
        feasible,
        current: None,
        started: false,
    }
}

impl Partitions {
    /// Smallest feasible completion of positions `from..d` with remainder `r`.
    fn fill(&self, v: &mut [u64], from: usize, mut r: u64) {
        for pos in from..self.d {
            let part = pos as u64 + 1;
            let l = (0..=r / part)
                .find(|&l| self.feasible[pos + 1][(r - l * part) as usize])
                .expect("remainder is feasible");
            v[pos] = l;
            r -= l * part;
        }
    }
}

impl Iterator for Partitions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if !self.started {
            self.started = true;
            let mut v = vec![0; self.d];
            self.fill(&mut v, 0, self.n);
            self.current = Some(v.clone());
            return Some(v);
        }
        let mut v = self.current.take()?;
        let mut used: Vec<u64> = Vec::with_capacity(self.d + 1);
        used.push(0);
        for (i, l) in v.iter().enumerate() {
            let last = *used.last().unwrap();
            used.push(last + l * (i as u64 + 1));
        }
        for pos in (0..self.d.saturating_sub(1)).rev() {
            let part = pos as u64 + 1;
            let r = self.n - used[pos];
            let next =
                (v[pos] + 1..=r / part).find(|&l| self.feasible[pos + 1][(r - l * part) as usize]);
            if let Some(l) = next {
                v[pos] = l;
                self.fill(&mut v, pos + 1, r - l * part);
                self.current = Some(v.clone());
                return Some(v);
            }
        }
        None
    }
}

/// Exact binomials `C(top, k)` with memoization.
#[derive(Default)]
pub struct BinomialCache {
    memo: HashMap<(u64, u64), BigInt>,
}

impl BinomialCache {
    pub fn get(&mut self, top: u64, k: u64) -> BigInt {
        if k > top {
            return BigInt::zero();
        }
        let k = k.min(top - k);
        self.memo
            .entry((top, k))
            .or_insert_with(|| num_integer::binomial(BigInt::from(top), BigInt::from(k)))
            .clone()
    }
}

/// Contribution evaluator bound to one polynomial.
pub struct Contributions<'a> {
    f: &'a SparsePolynomial,
    coeffs: Vec<Rat>,
    binomials: BinomialCache,
}

impl<'a> Contributions<'a> {
    pub fn new(f: &'a SparsePolynomial) -> Self {
        Self {
            f,
            coeffs: f.to_dense(),
            binomials: BinomialCache::default(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn polynomial(&self) -> &SparsePolynomial {
        self.f
    }

    pub fn contribution(&mut self, lambda: &[u64], m: u64) -> Rat {
        let total: u64 = lambda.iter().sum();
        if total > m {
            return Rat::zero();
        }
        let mut count = BigInt::one();
        let mut left = m;
        let mut value = Rat::one();
        for (i, &l) in lambda.iter().enumerate() {
            if l == 0 {
                continue;
            }
            let a = self.coeffs.get(i + 1).cloned().unwrap_or_else(Rat::zero);
            if a.is_zero() {
                return Rat::zero();
            }
            count *= self.binomials.get(left, l);
            left -= l;
            value *= pow_rat(&a, l);
        }
        let a0 = self.coeffs.first().cloned().unwrap_or_else(Rat::zero);
        if left > 0 {
            value *= pow_rat(&a0, left);
        }
        value * Rat::from_integer(count)
    }
}

pub fn contribution(lambda: &[u64], m: u64, f: &SparsePolynomial) -> Rat {
    Contributions::new(f).contribution(lambda, m)
}

#[derive(Clone, Copy, Debug)]
pub struct PartitionGuard {
    pub max_n: u64,
    pub max_m: u64,
}

impl Default for PartitionGuard {
    fn default() -> Self {
        Self {
            max_n: 12,
            max_m: 30,
        }
    }
}

pub fn coefficient_via_partitions(f: &SparsePolynomial, n: u64, m: u64) -> Result<Rat> {
    coefficient_via_partitions_guarded(f, n, m, PartitionGuard::default())
}

pub fn coefficient_via_partitions_guarded(
    f: &SparsePolynomial,
    n: u64,
    m: u64,
    guard: PartitionGuard,
) -> Result<Rat> {
    if n > guard.max_n || m > guard.max_m {
        return Err(Error::Budget(format!(
            "partition expansion limited to n <= {}, m <= {}",
            guard.max_n, guard.max_m
        )));
    }
    let d = f
        .degree()
        .ok_or_else(|| Error::Input("zero polynomial".into()))? as usize;
    let mut c = Contributions::new(f);
    if d == 0 {
        return Ok(if n == 0 {
            pow_rat(&f.coeff(0), m)
        } else {
            Rat::zero()
        });
    }
    Ok(enumerate_partitions(n, d)
        .map(|l| c.contribution(&l, m))
        .sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionTerm {
    pub multiplicities: Vec<u64>,
    #[serde(with = "crate::rational::serde_rat")]
    pub contribution: Rat,
    pub mapped: Option<Vec<u64>>,
    #[serde(with = "crate::rational::serde_rat::option")]
    pub mapped_contribution: Option<Rat>,
    /// Index of the negative part that was replaced.
    pub j: Option<u64>,
}

/// `M(λ)`: replace one part `j` (least index with `a_j < 0`, `λ_j > 0`) by
/// the max-weight decomposition of `j` into positive-support parts.
pub fn compress(lambda: &[u64], f: &SparsePolynomial, n: u64, m: u64) -> Result<PartitionTerm> {
    let mut c = Contributions::new(f);
    let mut decomps = BTreeMap::new();
    compress_with(&mut c, &mut decomps, lambda, n, m)
}

fn compress_with(
    c: &mut Contributions<'_>,
    decomps: &mut BTreeMap<u64, Vec<u64>>,
    lambda: &[u64],
    n: u64,
    m: u64,
) -> Result<PartitionTerm> {
    let size: u64 = lambda
        .iter()
        .enumerate()
        .map(|(i, l)| (i as u64 + 1) * l)
        .sum();
    if size != n {
        return Err(Error::Input(format!("partition sums to {size}, not {n}")));
    }
    if !c.polynomial().coeff(0).is_positive() {
        return Err(Error::Precondition(
            "compression needs a positive constant term".into(),
        ));
    }
    let cont = c.contribution(lambda, m);
    if !cont.is_negative() {
        return Err(Error::Precondition(
            "compression needs a negative contribution".into(),
        ));
    }
    let f = c.polynomial();
    let j = lambda
        .iter()
        .enumerate()
        .find(|(i, &l)| l > 0 && f.coeff(*i as u64 + 1).is_negative())
        .map(|(i, _)| i as u64 + 1)
        .ok_or_else(|| {
            Error::Precondition("negative contribution without a negative part".into())
        })?;
    let mu = match decomps.get(&j) {
        Some(mu) => mu.clone(),
        None => {
            let (_, mu) = weight_of_index(f, j)?;
            decomps.insert(j, mu.clone());
            mu
        }
    };
    let mut mapped = lambda.to_vec();
    mapped[j as usize - 1] -= 1;
    for part in &mu {
        mapped[*part as usize - 1] += 1;
    }
    let mc = c.contribution(&mapped, m);
    Ok(PartitionTerm {
        multiplicities: lambda.to_vec(),
        contribution: cont,
        mapped: Some(mapped),
        mapped_contribution: Some(mc),
        j: Some(j),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompressionReport {
    pub m: u64,
    pub n_max: u64,
    pub degree: u64,
    /// Partitions with negative contribution, over all `n <= n_max`.
    pub negative_terms: u64,
    /// `Cont(M(λ)) > d |Cont(λ)|` for every negative `λ`.
    pub inequality_holds: bool,
    /// Smallest `Cont(M(λ)) / (d |Cont(λ)|)` seen.
    pub min_ratio: f64,
    pub max_preimages: u64,
    pub preimages_bounded: bool,
    /// Prefix sums of `λ` and `M(λ)` differ by at most `j`.
    pub prefix_deviation_ok: bool,
    /// `Σ_{Cont<0} (Cont(λ) + Cont(M(λ))/d) >= 0` for every `n`.
    pub resummation_non_negative: bool,
    pub failures: Vec<(u64, Vec<u64>)>,
}

/// Checks the compression inequality and its side conditions for all
/// `n <= n_max` at a fixed `m`.
pub fn compression_check(f: &SparsePolynomial, m: u64, n_max: u64) -> Result<CompressionReport> {
    let d = f
        .degree()
        .ok_or_else(|| Error::Input("zero polynomial".into()))?;
    if d == 0 {
        return Err(Error::Input(
            "compression needs a non-constant polynomial".into(),
        ));
    }
    let mut c = Contributions::new(f);
    let mut decomps = BTreeMap::new();
    let dq = Rat::from_integer(BigInt::from(d));
    let mut report = CompressionReport {
        m,
        n_max,
        degree: d,
        negative_terms: 0,
        inequality_holds: true,
        min_ratio: f64::INFINITY,
        max_preimages: 0,
        preimages_bounded: true,
        prefix_deviation_ok: true,
        resummation_non_negative: true,
        failures: Vec::new(),
    };
    for n in 0..=n_max {
        let mut images: HashMap<Vec<u64>, u64> = HashMap::new();
        let mut resum = Rat::zero();
        for lambda in enumerate_partitions(n, d as usize) {
            let cont = c.contribution(&lambda, m);
            if !cont.is_negative() {
                continue;
            }
            report.negative_terms += 1;
            let term = compress_with(&mut c, &mut decomps, &lambda, n, m)?;
            let mapped = term.mapped.unwrap();
            let mc = term.mapped_contribution.unwrap();
            let bound = &dq * cont.abs();
            if mc <= bound {
                report.inequality_holds = false;
                report.failures.push((n, lambda.clone()));
            }
            let ratio = crate::rational::rat_to_f64(&(&mc / &bound));
            report.min_ratio = report.min_ratio.min(ratio);
            let j = term.j.unwrap() as i64;
            let (mut s1, mut s2) = (0i64, 0i64);
            for (a, b) in lambda.iter().zip(&mapped) {
                s1 += *a as i64;
                s2 += *b as i64;
                if (s1 - s2).abs() > j {
                    report.prefix_deviation_ok = false;
                }
            }
            resum += cont + mc / &dq;
            *images.entry(mapped).or_default() += 1;
        }
        let most = images.values().copied().max().unwrap_or(0);
        report.max_preimages = report.max_preimages.max(most);
        if most > d {
            report.preimages_bounded = false;
        }
        if resum.is_negative() {
            report.resummation_non_negative = false;
        }
    }
    if !report.min_ratio.is_finite() {
        report.min_ratio = f64::INFINITY;
    }
    Ok(report)
}

/// Least `m` in `[1, m_limit]` from which the compression inequality holds
/// at every `m' ∈ [m, m_limit]` for all `n <= n_max`.
pub fn compression_onset(f: &SparsePolynomial, n_max: u64, m_limit: u64) -> Result<Option<u64>> {
    let mut onset = None;
    for m in (1..=m_limit).rev() {
        if compression_check(f, m, n_max)?.inequality_holds {
            onset = Some(m);
        } else {
            break;
        }
    }
    Ok(onset)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialRatioCheck {
    /// `C(a,b) / C(a-i, b+j) <= a^{-j(1-γ)}`.
    pub holds: bool,
    pub hypotheses_satisfied: bool,
    pub violated_hypotheses: Vec<String>,
}

/// `A(d, γ) = ⌈(16 d)^{2/γ}⌉`, the lower bound on `a` used here.
pub fn binomial_ratio_threshold(d: u64, gamma: (u64, u64)) -> BigInt {
    let (p, q) = gamma;
    // (16d)^{2q/p}, rounded up: smallest integer A with A^p >= (16d)^{2q}.
    let target = num_traits::pow(BigInt::from(16 * d), (2 * q) as usize);
    let mut a = BigInt::from((16.0 * d as f64).powf(2.0 * q as f64 / p as f64).floor() as u128)
        .max(BigInt::one());
    while num_traits::pow(a.clone(), p as usize) < target {
        a += 1;
    }
    while a > BigInt::one() && num_traits::pow(&a - 1u32, p as usize) >= target {
        a -= 1;
    }
    a
}

/// Exact check of the binomial ratio bound with `γ = p/q ∈ (0, 1)`.
pub fn binomial_ratio_bound_check(
    a: &BigInt,
    b: u64,
    i: i64,
    j: u64,
    gamma: (u64, u64),
    d: u64,
) -> Result<BinomialRatioCheck> {
    let (p, q) = gamma;
    if p == 0 || p >= q {
        return Err(Error::Input("gamma must lie in (0, 1)".into()));
    }
    let mut violated = Vec::new();
    if i.unsigned_abs() > d {
        violated.push(format!("|i| = {} exceeds d = {d}", i.abs()));
    }
    if j < 1 || j > d {
        violated.push(format!("j = {j} outside 1..={d}"));
    }
    // b <= (4d)^{-d} a^γ  <=>  b^q (4d)^{dq} <= a^p
    let lhs = num_traits::pow(BigInt::from(b), q as usize)
        * num_traits::pow(BigInt::from(4 * d), (d * q) as usize);
    if lhs > num_traits::pow(a.clone(), p as usize) {
        violated.push(format!("b = {b} exceeds (4d)^-d a^gamma"));
    }
    let threshold = binomial_ratio_threshold(d, gamma);
    if *a < threshold {
        violated.push(format!("a below A(d, gamma) = {threshold}"));
    }
    let top2 = a - BigInt::from(i);
    if top2.is_negative() {
        return Err(Error::Input("a - i must be non-negative".into()));
    }
    let num = big_binomial(a, b);
    let den = big_binomial(&top2, b + j);
    let holds = if den.is_zero() {
        false
    } else {
        // (num/den)^q <= a^{-j(q-p)}  <=>  num^q a^{j(q-p)} <= den^q
        let l =
            num_traits::pow(num, q as usize) * num_traits::pow(a.clone(), (j * (q - p)) as usize);
        l <= num_traits::pow(den, q as usize)
    };
    Ok(BinomialRatioCheck {
        holds,
        hypotheses_satisfied: violated.is_empty(),
        violated_hypotheses: violated,
    })
}

/// `C(top, k)` for a big `top` and small `k`.
pub fn big_binomial(top: &BigInt, k: u64) -> BigInt {
    if BigInt::from(k) > *top {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..k {
        num *= top - BigInt::from(t);
        den *= BigInt::from(t + 1);
    }
    num / den
}

/// `x = a m + b (m+1) + c (m-1)` with `a, b, c >= x / (4m)`.
///
/// With `s = a + b + c` and `ℓ = b - c` the identity reads `s m + ℓ = x`;
/// `s` is taken near `x/m` so that `|ℓ| <= m/2`, and the three parts are
/// then balanced.
pub fn consecutive_decomposition(x: u64, m: u64) -> Result<(u64, u64, u64)> {
    if m < 2 || (x as u128) < 8 * (m as u128) * (m as u128) {
        return Err(Error::Input(format!(
            "need m >= 2 and x >= 8m^2 (x = {x}, m = {m})"
        )));
    }
    let (x, m) = (x as i128, m as i128);
    let base = x / m;
    let mut best: Option<(i128, (i128, i128, i128))> = None;
    for s in base - 2..=base + 2 {
        let l = x - s * m;
        let centres = [
            Integer::div_floor(&(s - l), &3),
            Integer::div_floor(&(s - 2 * l), &3),
        ];
        for c0 in centres {
            for c in c0 - 1..=c0 + 1 {
                let a = s - l - 2 * c;
                let b = c + l;
                let lo = a.min(b).min(c);
                if best.is_none_or(|(v, _)| lo > v) {
                    best = Some((lo, (a, b, c)));
                }
            }
        }
    }
    let (lo, (a, b, c)) = best.unwrap();
    debug_assert_eq!(a * m + b * (m + 1) + c * (m - 1), x);
    if 4 * m * lo < x {
        return Err(Error::Precondition(format!(
            "no balanced decomposition of {x} for m = {m}"
        )));
    }
    Ok((a as u64, b as u64, c as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    fn p(terms: &[(i64, i64, i64)]) -> SparsePolynomial {
        SparsePolynomial::from_term_list(terms.iter().map(|&(e, n, d)| (e, rat(n, d)))).unwrap()
    }

    /// Partitions of n into parts <= d by recursion on the largest part.
    fn brute_partitions(n: u64, max_part: u64) -> Vec<Vec<u64>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for part in (1..=max_part.min(n)).rev() {
            for mut rest in brute_partitions(n - part, part) {
                rest.insert(0, part);
                out.push(rest);
            }
        }
        out
    }

    fn to_mult(parts: &[u64], d: usize) -> Vec<u64> {
        let mut v = vec![0; d];
        for &x in parts {
            v[x as usize - 1] += 1;
        }
        v
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(5, 5).count(), 7);
        let zero: Vec<_> = enumerate_partitions(0, 3).collect();
        assert_eq!(zero, vec![vec![0, 0, 0]]);
        let three: Vec<_> = enumerate_partitions(3, 2).collect();
        assert_eq!(three, vec![vec![1, 1], vec![3, 0]]);
        assert_eq!(enumerate_partitions(30, 30).count(), 5604);
    }

    #[test]
    fn lexicographic_and_complete() {
        for d in 1..=6usize {
            for n in 0..=14u64 {
                let got: Vec<_> = enumerate_partitions(n, d).collect();
                let mut sorted = got.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(got, sorted, "not strictly increasing for n={n} d={d}");
                let mut expect: Vec<_> = brute_partitions(n, d as u64)
                    .iter()
                    .map(|x| to_mult(x, d))
                    .collect();
                expect.sort();
                assert_eq!(got, expect);
            }
        }
    }

    #[test]
    fn contribution_examples() {
        let f = p(&[(0, 1, 1), (2, 1, 1), (3, 1, 1), (5, -7, 1)]);
        assert_eq!(contribution(&[0, 1, 1, 0, 0], 10, &f), rat(90, 1));
        assert_eq!(contribution(&[0, 0, 0, 0, 1], 10, &f), rat(-70, 1));
        assert_eq!(contribution(&[0, 0, 0, 0, 0], 10, &f), rat(1, 1));
        assert_eq!(contribution(&[1, 0, 0, 0, 0], 10, &f), rat(0, 1));
        assert_eq!(contribution(&[0, 11, 0, 0, 0], 10, &f), rat(0, 1));
    }

    #[test]
    fn coefficient_examples() {
        let f = p(&[(0, 1, 1), (2, 1, 1), (3, 1, 1), (5, -1, 1)]);
        assert_eq!(coefficient_via_partitions(&f, 5, 10).unwrap(), rat(80, 1));
        let g = p(&[(0, 3, 2), (1, -1, 1)]);
        assert_eq!(
            coefficient_via_partitions(&g, 0, 7).unwrap(),
            pow_rat(&rat(3, 2), 7)
        );
        assert!(matches!(
            coefficient_via_partitions(&f, 13, 5),
            Err(Error::Budget(_))
        ));
        assert!(matches!(
            coefficient_via_partitions(&f, 5, 31),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn compression_examples() {
        let f = p(&[(0, 1, 1), (2, 1, 1), (3, 1, 1), (5, -4, 1)]);
        let t = compress(&[0, 0, 0, 0, 1], &f, 5, 10).unwrap();
        assert_eq!(t.mapped, Some(vec![0, 1, 1, 0, 0]));
        assert_eq!(t.j, Some(5));
        assert!(matches!(
            compress(&[0, 1, 1, 0, 0], &f, 5, 10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn compression_inequality_small() {
        let f = p(&[(0, 1, 1), (2, 1, 1), (3, 1, 1), (4, -1, 10), (5, 1, 1)]);
        let r = compression_check(&f, 10_000, 10).unwrap();
        assert!(r.negative_terms > 0);
        assert!(
            r.inequality_holds && r.preimages_bounded && r.prefix_deviation_ok,
            "{r:?}"
        );
        assert!(r.resummation_non_negative);
        let onset = compression_onset(&f, 4, 200).unwrap();
        assert!(onset.is_some_and(|m| m > 1), "{onset:?}");
    }

    #[test]
    fn binomial_ratio_examples() {
        let r = binomial_ratio_bound_check(&BigInt::from(1_000_000), 3, 1, 1, (1, 2), 3).unwrap();
        assert!(r.holds);
        assert!(!r.hypotheses_satisfied);
        // j = 1, i = 0: ratio (b+1)/(a-b) against a^{-(1-γ)}
        for (a, b) in [
            (10_000u64, 3u64),
            (10_000, 99),
            (10_000, 100),
            (10_000, 101),
        ] {
            let r = binomial_ratio_bound_check(&BigInt::from(a), b, 0, 1, (1, 2), 1).unwrap();
            let closed = (b as f64 + 1.0) / (a - b) as f64 <= (a as f64).powf(-0.5);
            assert_eq!(r.holds, closed, "a={a} b={b}");
        }
        assert_eq!(binomial_ratio_threshold(1, (1, 2)), BigInt::from(65536));
    }

    #[test]
    fn three_power_examples() {
        assert_eq!(consecutive_decomposition(72, 3).unwrap(), (8, 8, 8));
        for m in 2..40u64 {
            let (a, b, c) = consecutive_decomposition(8 * m * m, m).unwrap();
            assert!(a.max(b).max(c) - a.min(b).min(c) <= 2, "m={m}: {a} {b} {c}");
        }
        assert!(consecutive_decomposition(71, 3).is_err());
        assert!(consecutive_decomposition(100, 1).is_err());
    }

    #[test]
    fn three_power_exhaustive_small() {
        for m in 2..=12u64 {
            for x in 8 * m * m..8 * m * m + 4 * m {
                let (a, b, c) = consecutive_decomposition(x, m).unwrap();
                assert_eq!(a * m + b * (m + 1) + c * (m - 1), x);
                assert!(4 * m * a.min(b).min(c) >= x);
            }
        }
    }

    fn arb_poly() -> impl Strategy<Value = SparsePolynomial> {
        prop::collection::vec((-3i64..=3, 1i64..=2), 2..6).prop_map(|v| {
            let terms: Vec<(i64, Rat)> = v
                .iter()
                .enumerate()
                .map(|(i, &(n, d))| (i as i64, rat(n, d)))
                .collect();
            SparsePolynomial::from_term_list(terms).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn partition_sum_matches_convolution(f in arb_poly(), n in 0u64..=8, m in 0u64..=20) {
            prop_assume!(f.degree().is_some_and(|d| d >= 1));
            let via = coefficient_via_partitions(&f, n, m).unwrap();
            prop_assert_eq!(via, f.pow(m).coeff(n));
        }

        #[test]
        fn compress_preserves_size(f in arb_poly(), n in 1u64..=8, m in 1u64..=20) {
            let d = f.degree().unwrap_or(0) as usize;
            prop_assume!(d >= 1 && f.coeff(0).is_positive());
            for lambda in enumerate_partitions(n, d) {
                if contribution(&lambda, m, &f).is_negative() {
                    match compress(&lambda, &f, n, m) {
                        Ok(t) => {
                            let mapped = t.mapped.unwrap();
                            let size: u64 = mapped.iter().enumerate().map(|(i, l)| (i as u64 + 1) * l).sum();
                            prop_assert_eq!(size, n);
                            let (_, mu) = weight_of_index(&f, t.j.unwrap()).unwrap();
                            let parts_before: u64 = lambda.iter().sum();
                            let parts_after: u64 = mapped.iter().sum();
                            prop_assert_eq!(parts_after, parts_before + mu.len() as u64 - 1);
                        }
                        Err(Error::NotCoverable(_)) => {}
                        Err(e) => prop_assert!(false, "{e}"),
                    }
                }
            }
        }

        #[test]
        fn three_power_identity(m in 2u64..2000, extra in 0u64..1_000_000) {
            let x = 8 * m * m + extra;
            let (a, b, c) = consecutive_decomposition(x, m).unwrap();
            prop_assert_eq!(a * m + b * (m + 1) + c * (m - 1), x);
            prop_assert!(4 * m * a.min(b).min(c) >= x);
        }
    }
}
