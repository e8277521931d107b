//! Exact sparse univariate polynomials with rational coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::convolve;
use crate::error::{Error, Result};
use crate::rational::{rat_to_f64, Rat};

/// Polynomial stored as a map from exponent to nonzero rational coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SparsePolynomial {
    terms: BTreeMap<u64, Rat>,
}

/// Sign-partitioned support of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SupportProfile {
    pub s_plus: BTreeSet<u64>,
    pub s_minus: BTreeSet<u64>,
    pub s_all: BTreeSet<u64>,
}

/// `f = z^shift_k * core_g(z^stride_l)` with `stride_l` maximal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveDecomposition {
    pub shift_k: u64,
    pub stride_l: u64,
    pub core_g: SparsePolynomial,
}

impl PrimitiveDecomposition {
    /// Rebuilds `z^k g(z^l)`.
    pub fn reconstruct(&self) -> SparsePolynomial {
        SparsePolynomial::from_map(
            self.core_g
                .terms
                .iter()
                .map(|(&e, c)| (self.shift_k + self.stride_l * e, c.clone()))
                .collect(),
        )
    }
}

/// Complex evaluation result with an absolute error bound on each part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexEvaluation {
    pub value: Complex64,
    pub error_bound: f64,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: u64, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    fn from_map(mut terms: BTreeMap<u64, Rat>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; duplicate
    /// exponents are summed and zero coefficients dropped.
    pub fn from_term_list<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Rat)>,
    {
        let mut map: BTreeMap<u64, Rat> = BTreeMap::new();
        for (e, c) in terms {
            if e < 0 {
                return Err(Error::Input(format!("negative exponent {e}")));
            }
            *map.entry(e as u64).or_insert_with(Rat::zero) += c;
        }
        Ok(Self::from_map(map))
    }

    /// Convenience constructor from small integer `(exponent, coefficient)` pairs.
    pub fn from_int_terms(terms: &[(u64, i64)]) -> Self {
        let mut map: BTreeMap<u64, Rat> = BTreeMap::new();
        for &(e, c) in terms {
            *map.entry(e).or_insert_with(Rat::zero) += Rat::from_integer(BigInt::from(c));
        }
        Self::from_map(map)
    }

    /// Dense coefficients `c[0..=deg]`.
    pub fn from_dense(coeffs: &[Rat]) -> Self {
        Self::from_map(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (i as u64, c.clone()))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest exponent carrying a nonzero coefficient.
    pub fn low_degree(&self) -> Option<u64> {
        self.terms.keys().next().copied()
    }

    pub fn coeff(&self, exp: u64) -> Rat {
        self.terms.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff_ref(&self, exp: u64) -> Option<&Rat> {
        self.terms.get(&exp)
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.values().next_back()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rat)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }

    pub fn to_dense(&self) -> Vec<Rat> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|e| self.coeff(e)).collect(),
        }
    }

    /// Coefficients as `f64` (rounded to nearest), dense.
    pub fn to_dense_f64(&self) -> Vec<f64> {
        self.to_dense().iter().map(rat_to_f64).collect()
    }

    /// Returns `(numerators, denominator)` with `f = numerators / denominator`,
    /// the denominator being the lcm of all coefficient denominators.
    pub fn to_dense_integer(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .to_dense()
            .into_iter()
            .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
            .collect();
        (nums, den)
    }

    pub fn from_dense_integer(nums: &[BigInt], den: &BigInt) -> Self {
        Self::from_map(
            nums.iter()
                .enumerate()
                .filter(|(_, n)| !n.is_zero())
                .map(|(i, n)| (i as u64, Rat::new(n.clone(), den.clone())))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut map = self.terms.clone();
        for (&e, c) in &other.terms {
            *map.entry(e).or_insert_with(Rat::zero) += c;
        }
        Self::from_map(map)
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::from_map(self.terms.iter().map(|(&e, c)| (e, c * s)).collect())
    }

    /// Exact product. Sparse inputs use a pairwise product; dense ones go
    /// through integer convolution.
    pub fn multiply(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let pairs = self.terms.len() * other.terms.len();
        let dense_len = (self.degree().unwrap() + other.degree().unwrap() + 1) as usize;
        if pairs <= 4 * dense_len {
            let mut map: BTreeMap<u64, Rat> = BTreeMap::new();
            for (&e1, c1) in &self.terms {
                for (&e2, c2) in &other.terms {
                    *map.entry(e1 + e2).or_insert_with(Rat::zero) += c1 * c2;
                }
            }
            return Self::from_map(map);
        }
        let (a, da) = self.to_dense_integer();
        let (b, db) = other.to_dense_integer();
        Self::from_dense_integer(&convolve::multiply(&a, &b), &(da * db))
    }

    /// Exact `f^m` by binary exponentiation; `f^0 = 1`.
    pub fn pow(&self, m: u64) -> Self {
        if m == 0 {
            return Self::one();
        }
        if self.is_zero() {
            return Self::zero();
        }
        let low = self.low_degree().unwrap();
        // Factor out z^low, power the dense integer form, shift back.
        let shifted = Self::from_map(
            self.terms
                .iter()
                .map(|(&e, c)| (e - low, c.clone()))
                .collect(),
        );
        let (nums, den) = shifted.to_dense_integer();
        let powered = pow_dense_integer(&nums, m);
        let den_m = num_traits::pow::pow(den, m as usize);
        let core = Self::from_dense_integer(&powered, &den_m);
        core.shift(low * m)
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: u64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    /// Divides by `z^k`; panics if `k` exceeds the lowest exponent.
    pub fn shift_down(&self, k: u64) -> Self {
        assert!(
            self.low_degree().is_none_or(|lo| lo >= k),
            "z^{k} does not divide"
        );
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e - k, c.clone()))
                .collect(),
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        let mut prev: Option<u64> = None;
        for (&e, c) in self.terms.iter().rev() {
            if let Some(p) = prev {
                acc *= pow_rat(x, p - e);
            }
            acc += c;
            prev = Some(e);
        }
        if let Some(p) = prev {
            acc *= pow_rat(x, p);
        }
        acc
    }

    /// Exact evaluation at the Gaussian rational `re + i im`.
    pub fn eval_gaussian(&self, re: &Rat, im: &Rat) -> (Rat, Rat) {
        let mut acc = (Rat::zero(), Rat::zero());
        if self.is_zero() {
            return acc;
        }
        let d = self.degree().unwrap();
        for e in (0..=d).rev() {
            // acc = acc * z + c_e
            let nr = &acc.0 * re - &acc.1 * im;
            let ni = &acc.0 * im + &acc.1 * re;
            acc = (nr, ni);
            if let Some(c) = self.terms.get(&e) {
                acc.0 += c;
            }
        }
        acc
    }

    /// Floating-point Horner evaluation with a running error bound
    /// (absolute, valid for each of the real and imaginary parts).
    pub fn evaluate(&self, z: Complex64) -> ComplexEvaluation {
        let dense = self.to_dense_f64();
        horner_with_bound(&dense, z, self.coeff_rounding_bound())
    }

    /// Evaluates at `z` (rounded to an exact dyadic point) exactly, then
    /// rounds the value to `precision_bits` of mantissa. The error bound
    /// covers that final rounding plus the conversion to `f64`.
    pub fn evaluate_with_precision(&self, z: Complex64, precision_bits: u32) -> ComplexEvaluation {
        let re = Rat::from_float(z.re).unwrap_or_else(Rat::zero);
        let im = Rat::from_float(z.im).unwrap_or_else(Rat::zero);
        let (vr, vi) = self.eval_gaussian(&re, &im);
        let vr = crate::rational::round_to_bits(&vr, precision_bits);
        let vi = crate::rational::round_to_bits(&vi, precision_bits);
        let value = Complex64::new(rat_to_f64(&vr), rat_to_f64(&vi));
        let rel = 2f64.powi(1 - precision_bits.min(1000) as i32) + f64::EPSILON;
        let error_bound = rel * (value.re.abs().max(value.im.abs())) * 2.0;
        ComplexEvaluation { value, error_bound }
    }

    fn coeff_rounding_bound(&self) -> f64 {
        // Conversion of each rational to f64 is off by at most one ulp.
        self.terms
            .values()
            .map(|c| rat_to_f64(c).abs() * f64::EPSILON)
            .fold(0.0, f64::max)
    }

    /// `z^d f(1/z)`.
    pub fn reverse(&self) -> Result<Self> {
        let d = self
            .degree()
            .ok_or_else(|| Error::Input("reverse of the zero polynomial".into()))?;
        Ok(Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (d - e, c.clone()))
                .collect(),
        })
    }

    /// Substitutes `z -> lam z`.
    pub fn scale_variable(&self, lam: &Rat) -> Result<Self> {
        if !lam.is_positive() {
            return Err(Error::Input("scale factor must be positive".into()));
        }
        Ok(Self::from_map(
            self.terms
                .iter()
                .map(|(&e, c)| (e, c * pow_rat(lam, e)))
                .collect(),
        ))
    }

    pub fn support_profile(&self) -> SupportProfile {
        let mut p = SupportProfile::default();
        for (&e, c) in &self.terms {
            if c.is_positive() {
                p.s_plus.insert(e);
            } else {
                p.s_minus.insert(e);
            }
            p.s_all.insert(e);
        }
        p
    }

    pub fn primitive_decompose(&self) -> Result<PrimitiveDecomposition> {
        if self.is_constant() {
            return Err(Error::Input(
                "primitive decomposition needs a non-constant polynomial".into(),
            ));
        }
        let k = self.low_degree().unwrap();
        let l = self
            .terms
            .keys()
            .map(|&e| e - k)
            .fold(0u64, |g, x| g.gcd(&x));
        // A monomial leaves only the difference 0; stride 1 by convention.
        let l = if l == 0 { 1 } else { l };
        let core_g = Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| ((e - k) / l, c.clone()))
                .collect(),
        };
        Ok(PrimitiveDecomposition {
            shift_k: k,
            stride_l: l,
            core_g,
        })
    }

    /// True when the polynomial is not of the form `z^k g(z^l)` with `k > 0`
    /// or `l >= 2`.
    pub fn is_primitive(&self) -> bool {
        match self.primitive_decompose() {
            Ok(d) => d.shift_k == 0 && d.stride_l == 1,
            Err(_) => false,
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        Self::from_map(
            self.terms
                .iter()
                .filter(|(&e, _)| e > 0)
                .map(|(&e, c)| (e - 1, c * Rat::from_integer(BigInt::from(e))))
                .collect(),
        )
    }
}

impl fmt::Debug for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePolynomial({})", crate::parse::format(self))
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format(self))
    }
}

pub fn pow_rat(x: &Rat, e: u64) -> Rat {
    num_traits::pow::pow(x.clone(), e as usize)
}

/// Binary exponentiation of a dense integer coefficient vector.
pub fn pow_dense_integer(base: &[BigInt], m: u64) -> Vec<BigInt> {
    let mut result = vec![BigInt::one()];
    if m == 0 {
        return result;
    }
    let mut b = base.to_vec();
    let mut e = m;
    loop {
        if e & 1 == 1 {
            result = convolve::multiply(&result, &b);
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        b = convolve::multiply(&b, &b);
    }
    result
}

/// Binary exponentiation keeping only indices `0..=max_index`.
pub fn pow_dense_integer_truncated(base: &[BigInt], m: u64, max_index: usize) -> Vec<BigInt> {
    let mut result = vec![BigInt::one()];
    if m == 0 {
        return result;
    }
    let mut b: Vec<BigInt> = base.iter().take(max_index + 1).cloned().collect();
    let mut e = m;
    loop {
        if e & 1 == 1 {
            result = convolve::truncated(&result, &b, max_index);
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        b = convolve::truncated(&b, &b, max_index);
    }
    result
}

fn horner_with_bound(coeffs: &[f64], z: Complex64, coeff_err: f64) -> ComplexEvaluation {
    if coeffs.is_empty() {
        return ComplexEvaluation {
            value: Complex64::new(0.0, 0.0),
            error_bound: 0.0,
        };
    }
    let u = f64::EPSILON / 2.0;
    let az = z.norm();
    let mut acc = Complex64::new(0.0, 0.0);
    // Running bound: sum of |partial| growth terms (Higham-style).
    let mut mu = 0.0f64;
    let mut coeff_part = 0.0f64;
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
        mu = mu * az + acc.norm();
        coeff_part = coeff_part * az + coeff_err;
    }
    // Complex multiply-add costs a few roundings per step; 8u is generous.
    let error_bound = (8.0 * u * mu + coeff_part) * (1.0 + 16.0 * u * coeffs.len() as f64);
    ComplexEvaluation {
        value: acc,
        error_bound,
    }
}

/// Exact integer `|x|` as `f64`, saturating.
pub fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Convenience: `BigRational` from integers.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
