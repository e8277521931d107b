//! Saddle radius: the smallest `ρ > 0` with `ρ f'(ρ) / f(ρ) = α`.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;

const SCAN_RATIO: f64 = 1.02;
const REL_TOL: f64 = 1e-12;

/// `(f(ρ), ρ f'(ρ))` in `f64`.
pub(crate) fn value_and_log_derivative(coeffs: &[(u64, f64)], rho: f64) -> (f64, f64) {
    let mut f = 0.0;
    let mut df = 0.0;
    for &(e, c) in coeffs {
        let t = c * rho.powi(e as i32);
        f += t;
        df += e as f64 * t;
    }
    (f, df)
}

pub(crate) fn float_terms(f: &SparsePolynomial) -> Vec<(u64, f64)> {
    f.terms()
        .map(|(e, c)| (e, crate::rational::rat_to_f64(c)))
        .collect()
}

/// Upper end of the scan: well beyond every root modulus.
fn scan_limit(terms: &[(u64, f64)]) -> f64 {
    let lead = terms.last().map(|t| t.1.abs()).unwrap_or(1.0);
    let cauchy = 1.0 + terms.iter().map(|t| t.1.abs() / lead).fold(0.0, f64::max);
    cauchy * 1e12
}

pub fn saddle_radius(f: &SparsePolynomial, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Input(format!("alpha must be positive, got {alpha}")));
    }
    if !f.coeff(0).is_positive() {
        return Err(Error::Precondition("saddle radius needs f(0) > 0".into()));
    }
    let terms = float_terms(f);
    let phi = |rho: f64| -> Option<f64> {
        let (v, d) = value_and_log_derivative(&terms, rho);
        (v > 0.0).then(|| d / v - alpha)
    };
    let mut lo = 1e-12;
    while phi(lo).is_none_or(|p| p >= 0.0) {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::SaddleNotFound(format!(
                "no negative start below alpha = {alpha}"
            )));
        }
    }
    let limit = scan_limit(&terms);
    let mut hi = lo;
    loop {
        let next = hi * SCAN_RATIO;
        if next > limit {
            return Err(Error::SaddleNotFound(format!(
                "no bracket for alpha = {alpha}"
            )));
        }
        match phi(next) {
            None => {
                return Err(Error::SaddleNotFound(format!(
                    "f vanishes on the real axis before ρ f'/f reaches {alpha}"
                )))
            }
            Some(p) if p >= 0.0 => {
                lo = hi;
                hi = next;
                break;
            }
            Some(_) => hi = next,
        }
    }
    while hi - lo > REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        match phi(mid) {
            Some(p) if p < 0.0 => lo = mid,
            Some(_) => hi = mid,
            None => return Err(Error::SaddleNotFound(format!("f vanishes near {mid}"))),
        }
    }
    let rho = 0.5 * (lo + hi);
    // a sign change across a double real root of f is a pole, not a root
    match phi(rho) {
        Some(p) if p.abs() <= 1e-6 * alpha.max(1.0) => Ok(rho),
        _ => Err(Error::SaddleNotFound(format!("pole of ρ f'/f near {rho}"))),
    }
}
