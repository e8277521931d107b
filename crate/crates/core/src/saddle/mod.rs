//! Saddle-point estimates of `[z^n] f^m`.
//!
//! On the circle `|z| = ρ` the Cauchy integral reads
//! `[z^n] f^m = (1/2π) ∫ e^{m h_ρ(θ)} dθ`. Integrands are evaluated relative
//! to `e^{m h_ρ(0)}` so that large `m` stays in range.

mod derivs;
mod quadrature;
mod radius;

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

pub use derivs::{h_derivatives, HDerivatives};
pub use quadrature::integrate;
pub use radius::saddle_radius;

use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;
use crate::rational::{ln_abs, rat_to_f64, Rat};

/// Three regions `|θ| < η`, `η < |θ| < θ₀`, `|θ| > θ₀`, with values scaled by
/// `e^{-m h_ρ(0)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralSplit {
    pub k: u64,
    pub eta: f64,
    pub theta0: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    /// `|Im I_j| / |I_1 + I_2 + I_3|`.
    pub imag_relative: [f64; 3],
    /// `m h_ρ(0)`.
    pub log_scale: f64,
}

impl IntegralSplit {
    pub fn total(&self) -> f64 {
        self.i1 + self.i2 + self.i3
    }

    pub fn dominant(&self) -> bool {
        self.i1 > self.i2.abs() + self.i3.abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaddleEstimate {
    pub n: u64,
    pub m: u64,
    pub alpha: f64,
    pub rho: f64,
    pub h0: f64,
    pub h2: f64,
    pub estimate: f64,
    /// `ln |estimate|`, finite even when `estimate` overflows.
    pub log_estimate: f64,
    #[serde(with = "crate::rational::serde_rat::option")]
    pub exact: Option<Rat>,
    pub rel_error: Option<f64>,
    pub split: Option<IntegralSplit>,
}

#[derive(Clone, Copy, Debug)]
pub struct SaddleOptions {
    /// Exact coefficients are attached when `m · deg f` is at most this.
    pub exact_limit: u64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for SaddleOptions {
    fn default() -> Self {
        Self {
            exact_limit: 3000,
            abs_tol: 1e-14,
            rel_tol: 1e-11,
        }
    }
}

fn check_input(f: &SparsePolynomial) -> Result<(u64, f64)> {
    if f.is_zero() {
        return Err(Error::Input("zero polynomial".into()));
    }
    if !f.coeff(0).is_positive() || !f.leading_coeff().unwrap().is_positive() {
        return Err(Error::Precondition(
            "saddle estimates need positive constant and leading coefficients".into(),
        ));
    }
    let (k, ak) = f
        .terms()
        .find(|(e, _)| *e > 0)
        .map(|(e, c)| (e, rat_to_f64(c)))
        .ok_or_else(|| Error::Input("constant polynomial".into()))?;
    Ok((k, ak))
}

struct Contour {
    terms: Vec<(u64, f64)>,
    n: u64,
    m: u64,
    rho: f64,
    log_f_rho: f64,
}

impl Contour {
    /// `e^{m (h_ρ(θ) - h_ρ(0))}`.
    fn integrand(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(self.rho, theta);
        let fz = self
            .terms
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &(e, c)| {
                acc + z.powu(e as u32) * c
            });
        let expo =
            (fz.ln() - self.log_f_rho) * self.m as f64 - Complex64::new(0.0, self.n as f64 * theta);
        expo.exp()
    }
}

fn split_integrals(
    contour: &Contour,
    k: u64,
    ak: f64,
    h0: f64,
    opts: &SaddleOptions,
) -> IntegralSplit {
    let m = contour.m as f64;
    let kf = k as f64;
    let theta0 = (1.0 / kf).min(PI);
    let eta = (kf.powi(3) * ak.abs() * m * contour.rho.powi(k as i32))
        .powf(-1.0 / 3.0)
        .min(theta0);
    let g = |t: f64| contour.integrand(t);
    let q = |a: f64, b: f64| integrate(&g, a, b, opts.abs_tol, opts.rel_tol);
    let i1 = q(-eta, eta);
    let i2 = q(-theta0, -eta) + q(eta, theta0);
    let i3 = q(-PI, -theta0) + q(theta0, PI);
    let total = (i1 + i2 + i3).re.abs().max(f64::MIN_POSITIVE);
    IntegralSplit {
        k,
        eta,
        theta0,
        i1: i1.re,
        i2: i2.re,
        i3: i3.re,
        imag_relative: [
            i1.im.abs() / total,
            i2.im.abs() / total,
            i3.im.abs() / total,
        ],
        log_scale: m * h0,
    }
}

pub fn estimate_coefficient(f: &SparsePolynomial, n: u64, m: u64) -> Result<SaddleEstimate> {
    estimate_coefficient_with(f, n, m, &SaddleOptions::default())
}

pub fn estimate_coefficient_with(
    f: &SparsePolynomial,
    n: u64,
    m: u64,
    opts: &SaddleOptions,
) -> Result<SaddleEstimate> {
    let (k, ak) = check_input(f)?;
    if m == 0 {
        return Err(Error::Input("m must be positive".into()));
    }
    let d = f.degree().unwrap();
    let exact = if m.saturating_mul(d) <= opts.exact_limit {
        Some(crate::powers::coefficient_exact(f, n, m)?)
    } else {
        None
    };
    if n == 0 {
        let a0 = f.coeff(0);
        let h0 = ln_abs(&a0);
        let log_estimate = m as f64 * h0;
        return Ok(SaddleEstimate {
            n,
            m,
            alpha: 0.0,
            rho: 0.0,
            h0,
            h2: 0.0,
            estimate: log_estimate.exp(),
            log_estimate,
            rel_error: exact.as_ref().map(|_| 0.0),
            exact,
            split: None,
        });
    }
    let alpha = n as f64 / m as f64;
    let rho = saddle_radius(f, alpha)?;
    let terms = radius::float_terms(f);
    let derivs = derivs::h_derivatives_terms(&terms, alpha, rho, 0.0)?;
    let h0 = derivs.h.re;
    let contour = Contour {
        log_f_rho: radius::value_and_log_derivative(&terms, rho).0.ln(),
        terms,
        n,
        m,
        rho,
    };
    let split = split_integrals(&contour, k, ak, h0, opts);
    let normalized = split.total() / (2.0 * PI);
    let log_scale = m as f64 * h0;
    let log_estimate = log_scale + normalized.abs().ln();
    let estimate = normalized.signum() * log_estimate.exp();
    let rel_error = exact.as_ref().and_then(|e| {
        if e.is_zero() {
            return None;
        }
        let exact_normalized =
            if e.is_negative() { -1.0 } else { 1.0 } * (ln_abs(e) - log_scale).exp();
        Some((normalized - exact_normalized).abs() / exact_normalized.abs())
    });
    Ok(SaddleEstimate {
        n,
        m,
        alpha,
        rho,
        h0,
        h2: derivs.h2.re,
        estimate,
        log_estimate,
        exact,
        rel_error,
        split: Some(split),
    })
}

pub fn integral_split(f: &SparsePolynomial, n: u64, m: u64) -> Result<IntegralSplit> {
    let opts = SaddleOptions {
        exact_limit: 0,
        ..SaddleOptions::default()
    };
    if n == 0 {
        return Err(Error::Input("integral split needs n > 0".into()));
    }
    estimate_coefficient_with(f, n, m, &opts)?
        .split
        .ok_or_else(|| Error::Input("no split".into()))
}

/// `ρ^k k a_k / α`, `|h''(0)| / (k² a_k ρ^k)` and `sup |h'''| / (k³ a_k ρ^k)`;
/// with `a_k = 1/k` these are the ratios that tend to 1 as `α → 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticRatios {
    pub alpha: f64,
    pub rho: f64,
    pub rho_ratio: f64,
    pub h2_ratio: f64,
    /// Grid maximum over 1024 phases, so approximate.
    pub h3_ratio: f64,
}

impl DiagnosticRatios {
    pub fn within(&self, lo: f64, hi: f64) -> [bool; 3] {
        [self.rho_ratio, self.h2_ratio, self.h3_ratio].map(|r| (lo..=hi).contains(&r))
    }
}

const SUP_GRID: usize = 1024;

pub fn diagnostic_ratios(f: &SparsePolynomial, alpha: f64) -> Result<DiagnosticRatios> {
    let (k, ak) = check_input(f)?;
    let rho = saddle_radius(f, alpha)?;
    let terms = radius::float_terms(f);
    let base = ak * rho.powi(k as i32);
    let kf = k as f64;
    let h2 = derivs::h_derivatives_terms(&terms, alpha, rho, 0.0)?
        .h2
        .norm();
    let mut sup = 0.0f64;
    for i in 0..SUP_GRID {
        let theta = -PI + 2.0 * PI * i as f64 / SUP_GRID as f64;
        match derivs::h_derivatives_terms(&terms, alpha, rho, theta) {
            Ok(d) => sup = sup.max(d.h3.norm()),
            Err(_) => sup = f64::INFINITY,
        }
    }
    Ok(DiagnosticRatios {
        alpha,
        rho,
        rho_ratio: kf * base / alpha,
        h2_ratio: h2 / (kf * kf * base),
        h3_ratio: sup / (kf.powi(3) * base),
    })
}

/// For each of the three ratios, the largest `α` in `alphas` (taken in
/// decreasing order) from which the ratio stays in `[3/4, 5/4]` for every
/// smaller `α` in the list.
pub fn diagnostic_onset(
    f: &SparsePolynomial,
    alphas: &[f64],
) -> Result<(Vec<DiagnosticRatios>, [Option<f64>; 3])> {
    let mut sorted = alphas.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let rows = sorted
        .iter()
        .map(|&a| diagnostic_ratios(f, a))
        .collect::<Result<Vec<_>>>()?;
    let mut onset = [None; 3];
    for idx in 0..3 {
        for row in rows.iter().rev() {
            if row.within(0.75, 1.25)[idx] {
                onset[idx] = Some(row.alpha);
            } else {
                break;
            }
        }
    }
    Ok((rows, onset))
}
