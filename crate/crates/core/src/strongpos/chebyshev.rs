//! Chebyshev polynomials in the monomial basis and the exact division
//! helpers used to factor the modulus gap.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rat;

/// Dense univariate polynomial in `t`, ascending coefficients.
pub type TPoly = Vec<Rat>;

/// Monomial coefficients of `T_0 ..= T_n`.
pub fn chebyshev_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut table: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    if n >= 1 {
        table.push(vec![BigInt::zero(), BigInt::one()]);
    }
    for k in 2..=n {
        let mut next = vec![BigInt::zero(); k + 1];
        for (i, c) in table[k - 1].iter().enumerate() {
            next[i + 1] += c * 2;
        }
        for (i, c) in table[k - 2].iter().enumerate() {
            next[i] -= c;
        }
        table.push(next);
    }
    table
}

/// `1 - T_n(t)`.
pub fn one_minus_t(table: &[Vec<BigInt>], n: usize) -> TPoly {
    let mut p: TPoly = table[n]
        .iter()
        .map(|c| Rat::from_integer(-c.clone()))
        .collect();
    p[0] += Rat::one();
    trim(p)
}

pub fn trim(mut p: TPoly) -> TPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn add_scaled(acc: &mut TPoly, p: &[Rat], s: &Rat) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Rat::zero());
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += c * s;
    }
}

pub fn eval(p: &[Rat], t: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
}

pub fn eval_f64(p: &[f64], t: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Exact quotient `num / den`; `None` when the division leaves a remainder.
pub fn divide_exact(num: &[Rat], den: &[Rat]) -> Option<TPoly> {
    let num = trim(num.to_vec());
    let den = trim(den.to_vec());
    assert!(!den.is_empty(), "division by the zero polynomial");
    if num.is_empty() {
        return Some(Vec::new());
    }
    if num.len() < den.len() {
        return None;
    }
    let mut rem = num;
    let lead = den.last().unwrap().clone();
    let qlen = rem.len() - den.len() + 1;
    let mut quot = vec![Rat::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = &rem[i + den.len() - 1] / &lead;
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
        }
        quot[i] = c;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(trim(quot))
    } else {
        None
    }
}

/// `p(t) / (1 - t)`; panics when `p(1) != 0`.
pub fn divide_one_minus_t(p: &[Rat]) -> TPoly {
    divide_exact(p, &[Rat::one(), -Rat::one()]).expect("polynomial vanishes at t = 1")
}
