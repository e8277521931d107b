//! Exact coefficient profiles of `f^m`.
//!
//! Coefficients are kept as integers over a common denominator: with
//! `f = A(z) / D` (`D` the lcm of the coefficient denominators),
//! `f^m = A(z)^m / D^m`, so signs are read off the integer numerators.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::convolve;
use crate::error::{Error, Result};
use crate::poly::{pow_dense_integer, pow_dense_integer_truncated, SparsePolynomial};
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerProfile {
    pub m: u64,
    /// Numerators of `[z^n] f^m` for `n = 0 ..= m·deg f`.
    #[serde(serialize_with = "ser_bigints")]
    pub numerators: Vec<BigInt>,
    /// `D`, so that `[z^n] f^m = numerators[n] / D^m`.
    #[serde(serialize_with = "ser_bigint")]
    pub base_denominator: BigInt,
    pub first_negative: Option<u64>,
    pub negative_indices: BTreeSet<u64>,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_bigints<S: serde::Serializer>(x: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|v| v.to_string()))
}

impl PowerProfile {
    fn from_numerators(m: u64, numerators: Vec<BigInt>, base_denominator: BigInt) -> Self {
        let negative_indices: BTreeSet<u64> = numerators
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_negative())
            .map(|(i, _)| i as u64)
            .collect();
        Self {
            m,
            first_negative: negative_indices.first().copied(),
            numerators,
            base_denominator,
            negative_indices,
        }
    }

    pub fn denominator(&self) -> BigInt {
        num_traits::pow(self.base_denominator.clone(), self.m as usize)
    }

    pub fn coefficient(&self, n: u64) -> Rat {
        match self.numerators.get(n as usize) {
            Some(c) => Rat::new(c.clone(), self.denominator()),
            None => Rat::zero(),
        }
    }

    pub fn coefficients(&self) -> Vec<Rat> {
        let den = self.denominator();
        self.numerators
            .iter()
            .map(|c| Rat::new(c.clone(), den.clone()))
            .collect()
    }

    pub fn is_non_negative(&self) -> bool {
        self.first_negative.is_none()
    }
}

fn dense_parts(f: &SparsePolynomial) -> Result<(Vec<BigInt>, BigInt)> {
    if f.is_zero() {
        return Err(Error::Input("powers of the zero polynomial".into()));
    }
    Ok(f.to_dense_integer())
}

/// Exact `f^m` with its sign scan.
pub fn profile(f: &SparsePolynomial, m: u64) -> Result<PowerProfile> {
    let (nums, den) = dense_parts(f)?;
    let mut out = pow_dense_integer(&nums, m);
    out.resize(m as usize * (nums.len() - 1) + 1, BigInt::zero());
    Ok(PowerProfile::from_numerators(m, out, den))
}

/// Profiles of `f^1 ..= f^m_max` by repeated multiplication.
pub fn profiles_upto(f: &SparsePolynomial, m_max: u64) -> Result<Vec<PowerProfile>> {
    let (nums, den) = dense_parts(f)?;
    let sparse: Vec<(usize, BigInt)> = nums
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect();
    let mut cur = vec![BigInt::one()];
    let mut out = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        cur = multiply_sparse(&cur, &sparse, nums.len());
        out.push(PowerProfile::from_numerators(m, cur.clone(), den.clone()));
    }
    Ok(out)
}

fn multiply_sparse(dense: &[BigInt], sparse: &[(usize, BigInt)], base_len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); dense.len() + base_len - 1];
    for (e, c) in sparse {
        for (i, x) in dense.iter().enumerate() {
            if !x.is_zero() {
                out[i + e] += x * c;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdResult {
    /// Least `m0` with `f^m >= 0` for every `m ∈ [m0, m_max]`.
    pub m0: Option<u64>,
    pub m_max: u64,
    /// Window in which non-negativity was checked, when `m0` exists.
    pub window: Option<(u64, u64)>,
    /// `f(1) > 0`, the condition under which a window search is meaningful.
    pub positive_at_one: bool,
    pub note: &'static str,
}

pub const THRESHOLD_NOTE: &str =
    "empirical: non-negativity observed on [m0, m_max] only; not a proof for larger m";

/// Window-based empirical threshold. Heuristic by construction.
pub fn threshold_search(f: &SparsePolynomial, m_max: u64) -> Result<ThresholdResult> {
    if m_max == 0 {
        return Err(Error::Input("m_max must be at least 1".into()));
    }
    let profiles = profiles_upto(f, m_max)?;
    let mut m0 = None;
    for p in profiles.iter().rev() {
        if p.is_non_negative() {
            m0 = Some(p.m);
        } else {
            break;
        }
    }
    Ok(ThresholdResult {
        m0,
        m_max,
        window: m0.map(|m| (m, m_max)),
        positive_at_one: f.eval_rational(&Rat::one()).is_positive(),
        note: THRESHOLD_NOTE,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RangeCheck {
    pub ok: bool,
    pub violations: Vec<u64>,
}

/// Are all `[z^n] f^m` with `n ∈ [n_lo, n_hi]` non-negative?
pub fn range_check(f: &SparsePolynomial, m: u64, n_lo: u64, n_hi: u64) -> Result<RangeCheck> {
    let d = f
        .degree()
        .ok_or_else(|| Error::Input("powers of the zero polynomial".into()))?;
    if n_lo > n_hi || n_hi > m * d {
        return Err(Error::Input(format!(
            "need 0 <= n_lo <= n_hi <= m·deg = {}",
            m * d
        )));
    }
    let top = m * d;
    // The top of f^m is the bottom of reverse(f)^m.
    let (g, lo, hi, mirrored) = if n_lo > top / 2 {
        (f.reverse()?, top - n_hi, top - n_lo, true)
    } else {
        (f.clone(), n_lo, n_hi, false)
    };
    let (nums, _) = g.to_dense_integer();
    let coeffs = pow_dense_integer_truncated(&nums, m, hi as usize);
    let mut violations = Vec::new();
    for n in lo..=hi {
        if coeffs.get(n as usize).is_some_and(|c| c.is_negative()) {
            violations.push(if mirrored { top - n } else { n });
        }
    }
    violations.sort_unstable();
    Ok(RangeCheck {
        ok: violations.is_empty(),
        violations,
    })
}

/// Integer numerators of `[z^n] A^m` for `n = 0 ..= n_max`, where
/// `A(z) = Σ A_k z^k` has `A_0 != 0`, by the recurrence
/// `A_0 n Q_n = Σ_{k>=1} A_k ((m+1)k - n) Q_{n-k}` obtained from
/// `A·(A^m)' = m·A'·A^m`.
pub fn power_prefix_integer(a: &[BigInt], m: u64, n_max: usize) -> Vec<BigInt> {
    assert!(
        !a.is_empty() && !a[0].is_zero(),
        "recurrence needs a nonzero constant term"
    );
    let mut q = Vec::with_capacity(n_max + 1);
    q.push(num_traits::pow(a[0].clone(), m as usize));
    let m1 = BigInt::from(m) + 1;
    for n in 1..=n_max {
        let nb = BigInt::from(n);
        let mut acc = BigInt::zero();
        for k in 1..a.len().min(n + 1) {
            if a[k].is_zero() {
                continue;
            }
            let w = &m1 * k - &nb;
            acc += &a[k] * w * &q[n - k];
        }
        let den = &a[0] * &nb;
        let (quot, rem) = acc.div_rem(&den);
        debug_assert!(rem.is_zero());
        q.push(quot);
    }
    q
}

/// Exact `[z^n] f^m`; cost grows with `n·deg f`, not with `m`.
pub fn coefficient_exact(f: &SparsePolynomial, n: u64, m: u64) -> Result<Rat> {
    if f.is_zero() {
        return Err(Error::Input("powers of the zero polynomial".into()));
    }
    if m == 0 {
        return Ok(if n == 0 { Rat::one() } else { Rat::zero() });
    }
    let k = f.low_degree().unwrap();
    let d = f.degree().unwrap();
    if n < k * m || n > d * m {
        return Ok(Rat::zero());
    }
    let h = f.shift_down(k);
    let (a, den) = h.to_dense_integer();
    let idx = (n - k * m) as usize;
    let q = power_prefix_integer(&a, m, idx);
    Ok(Rat::new(q[idx].clone(), num_traits::pow(den, m as usize)))
}

/// `[z^n] f^m` by full convolution, used as an independent check.
pub fn coefficient_by_convolution(f: &SparsePolynomial, n: u64, m: u64) -> Result<Rat> {
    let (nums, den) = dense_parts(f)?;
    let mut acc = vec![BigInt::one()];
    for _ in 0..m {
        acc = convolve::truncated(&acc, &nums, n as usize);
    }
    let c = acc.get(n as usize).cloned().unwrap_or_default();
    Ok(Rat::new(c, num_traits::pow(den, m as usize)))
}

fn sign_of(c: &BigInt) -> i8 {
    if c.is_negative() {
        -1
    } else if c.is_zero() {
        0
    } else {
        1
    }
}

/// CSV with header `m,n,numerator,denominator_exponent,sign`; the
/// coefficient is `numerator / D^denominator_exponent` with `D` the lcm of
/// the denominators of `f`.
pub fn profiles_csv(profiles: &[PowerProfile]) -> String {
    let mut out = String::from("m,n,numerator,denominator_exponent,sign\n");
    for p in profiles {
        for (n, c) in p.numerators.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{},{}", p.m, n, c, p.m, sign_of(c));
        }
    }
    out
}

/// CSV with header `m,n,sign` for `m ∈ [m_lo, m_hi]`.
pub fn sign_profile_csv(f: &SparsePolynomial, m_lo: u64, m_hi: u64) -> Result<String> {
    if m_lo > m_hi {
        return Err(Error::Input("empty m range".into()));
    }
    let profiles = profiles_upto(f, m_hi)?;
    let mut out = String::from("m,n,sign\n");
    for p in profiles.iter().filter(|p| p.m >= m_lo) {
        for (n, c) in p.numerators.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", p.m, n, sign_of(c));
        }
    }
    Ok(out)
}
