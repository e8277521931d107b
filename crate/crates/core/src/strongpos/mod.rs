//! Strong positivity `f(|z|) > |f(z)|` off the positive real axis.
//!
//! The gap `f(r)^2 - |f(r e^{iθ})|^2` is a polynomial in `r` and
//! `t = cos θ`. Radii above one are mapped into `(0, 1]` through the
//! reversed polynomial, the forced zeros at `r = 0` and `t = 1` are divided
//! out, and the remaining compact problem is settled by interval
//! branch-and-bound. Zeros of the reduced gap at `r = 0`, `t = cos(2πi/q)`
//! are handled by splitting off the pairs whose phases agree there.

pub mod bivariate;
pub mod certify;
pub mod chebyshev;
pub mod gap;
pub mod phase;
pub mod refute;

use serde::Serialize;

use crate::rational::Rat;

pub use certify::{certify, certify_with, small_radius_margin, CertifyOptions, RadiusMargin};
pub use gap::{gap_expansion, GapExpansion, GapTerm};
pub use phase::{phase_sets, PhaseSets};
pub use refute::{equality_witness, refute, refute_strict, verify_witness};

pub const DEFAULT_DEPTH_BUDGET: u32 = 24;
pub const DEFAULT_REFUTE_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Certified,
    Refuted,
    Inconclusive,
}

/// A point `z = r e^{iθ}` with `|f(z)| >= f(|z|)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// Exact radius.
    #[serde(with = "crate::rational::serde_rat")]
    pub r: Rat,
    /// Exact `cos θ` when the point was verified through the gap polynomial.
    #[serde(with = "crate::rational::serde_rat::option")]
    pub cos_theta: Option<Rat>,
    pub theta: f64,
    pub z_re: f64,
    pub z_im: f64,
    /// `f(|z|)`.
    pub f_abs_z: f64,
    /// `|f(z)|`.
    pub abs_f_z: f64,
    /// `|f(z)| - f(|z|)`.
    pub margin: f64,
    /// Bound on the floating-point error in `margin`.
    pub error_bound: f64,
    /// `|f(z)| = f(|z|)` holds exactly (non-primitive input).
    pub equality: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CornerStats {
    pub q: u64,
    pub t0: u64,
    pub boxes: u64,
    /// Largest radius among boxes discharged by this split.
    pub strip_radius: f64,
    /// Widest `t` extent among those boxes.
    pub strip_width: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct HalfStats {
    pub side: String,
    pub boxes: u64,
    pub max_depth: u32,
    pub min_margin: f64,
    pub corners: Vec<CornerStats>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CertificationStats {
    pub boxes_examined: u64,
    pub max_depth: u32,
    /// Smallest lower bound of the reduced gap over directly certified boxes.
    pub min_margin: f64,
    pub halves: Vec<HalfStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrongPositivityVerdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub certification_stats: CertificationStats,
    pub boundary_strategy: String,
}
