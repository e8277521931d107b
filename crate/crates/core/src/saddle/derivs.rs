//! `h_ρ(θ) = log f(ρe^{iθ}) - α log(ρe^{iθ})` and its first three
//! θ-derivatives.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HDerivatives {
    #[serde(with = "complex_pair")]
    pub h: Complex64,
    #[serde(with = "complex_pair")]
    pub h1: Complex64,
    #[serde(with = "complex_pair")]
    pub h2: Complex64,
    #[serde(with = "complex_pair")]
    pub h3: Complex64,
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }
}

/// `f(z)` together with `z f'/f`, `z² f''/f`, `z³ f'''/f`.
pub(crate) struct LogMoments {
    pub value: Complex64,
    pub u: Complex64,
    pub v: Complex64,
    pub t: Complex64,
}

pub(crate) fn log_moments(terms: &[(u64, f64)], z: Complex64) -> Result<LogMoments> {
    let mut f = Complex64::new(0.0, 0.0);
    let (mut s1, mut s2, mut s3) = (f, f, f);
    let mut mag = 0.0;
    for &(e, c) in terms {
        let w = z.powu(e as u32) * c;
        let e = e as f64;
        f += w;
        s1 += w * e;
        s2 += w * (e * (e - 1.0));
        s3 += w * (e * (e - 1.0) * (e - 2.0));
        mag += w.norm();
    }
    if f.norm() <= 1e-14 * mag || f.norm() == 0.0 {
        return Err(Error::Pole);
    }
    Ok(LogMoments {
        value: f,
        u: s1 / f,
        v: s2 / f,
        t: s3 / f,
    })
}

pub fn h_derivatives(
    f: &SparsePolynomial,
    alpha: f64,
    rho: f64,
    theta: f64,
) -> Result<HDerivatives> {
    let terms = super::radius::float_terms(f);
    h_derivatives_terms(&terms, alpha, rho, theta)
}

pub(crate) fn h_derivatives_terms(
    terms: &[(u64, f64)],
    alpha: f64,
    rho: f64,
    theta: f64,
) -> Result<HDerivatives> {
    let z = Complex64::from_polar(rho, theta);
    let LogMoments { value, u, v, t } = log_moments(terms, z)?;
    let i = Complex64::i();
    let h = value.ln() - alpha * Complex64::new(rho.ln(), theta);
    let h1 = i * (u - alpha);
    let h2 = -(u + v - u * u);
    let h3 = -i * (u + 3.0 * v + t - 3.0 * u * u - 3.0 * u * v + 2.0 * u * u * u);
    Ok(HDerivatives { h, h1, h2, h3 })
}
