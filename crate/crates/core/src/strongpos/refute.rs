//! Witness search for `|f(z)| >= f(|z|)` off the positive real axis.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::bivariate::BiPoly;
use super::gap::gap_expansion;
use super::Witness;
use crate::poly::SparsePolynomial;
use crate::rational::{rat_from_f64, rat_to_f64, Rat};

const CANDIDATES: usize = 12;

/// Strict witness if one is found, otherwise the structural equality
/// witness of a non-primitive core.
pub fn refute(f: &SparsePolynomial, budget: usize) -> Option<Witness> {
    if f.is_zero() {
        return None;
    }
    refute_strict(f, budget).or_else(|| equality_witness(f))
}

/// Searches for a point with `|f(z)| > f(|z|)`, verified exactly.
pub fn refute_strict(f: &SparsePolynomial, budget: usize) -> Option<Witness> {
    if f.is_zero() {
        return None;
    }
    let k = f.low_degree().unwrap();
    let h = f.shift_down(k);
    let gap = gap_expansion(f).bivariate();
    if h.is_constant() {
        let c = h.coeff(0);
        return if c.is_negative() {
            verify_point(f, &gap, Rat::one(), -Rat::one())
        } else {
            None
        };
    }
    let rev = h.reverse().expect("nonzero");
    let halves = [(h.to_dense_f64(), false), (rev.to_dense_f64(), true)];
    let per_half = (budget / 2).max(64);
    let mut found: Vec<(Witness, f64)> = Vec::new();
    for (p, inverted) in &halves {
        for (r, th) in search_half(p, per_half, h.degree().unwrap()) {
            let rq = rat_from_f64(r);
            let tq = rat_from_f64(th.cos().clamp(-1.0, 1.0));
            let rf = if *inverted { rq.recip() } else { rq };
            if let Some(w) = verify_point(f, &gap, rf, tq) {
                let quality = if w.error_bound > 0.0 {
                    w.margin / w.error_bound
                } else {
                    f64::INFINITY
                };
                found.push((w, quality));
            }
        }
        if found.iter().any(|(_, q)| *q >= 1e3) {
            break;
        }
    }
    found
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(w, _)| w)
}

fn horner_real(p: &[f64], r: f64) -> f64 {
    p.iter().rev().fold(0.0, |a, c| a * r + c)
}

fn horner_complex(p: &[f64], z: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |a, c| a * z + c)
}

/// Relative violation `(|p(z)| - p(r)) / (|p(z)| + |p(r)|)`.
fn score(p: &[f64], r: f64, th: f64) -> f64 {
    let pr = horner_real(p, r);
    let pz = horner_complex(p, Complex64::from_polar(r, th)).norm();
    (pz - pr) / (pz + pr.abs() + f64::MIN_POSITIVE)
}

/// Grid scan over `r ∈ (0, 1]`, `θ ∈ (0, π]` followed by pattern-search
/// ascent from the best cells. Returns candidate points, best first.
fn search_half(p: &[f64], budget: usize, degree: u64) -> Vec<(f64, f64)> {
    let grid_budget = budget * 3 / 5;
    let n_r = ((grid_budget as f64 / 2.0).sqrt() as usize).max(4);
    let n_t = (grid_budget / n_r).max(4);
    let mut radii: Vec<f64> = (1..=n_r).map(|i| i as f64 / n_r as f64).collect();
    radii.extend((1..=30).map(|e| 0.5f64.powi(e)));
    let mut phases: Vec<f64> = (1..=n_t).map(|j| PI * j as f64 / n_t as f64).collect();
    for q in 2..=(degree + 1).min(64) {
        for i in 1..=q / 2 {
            phases.push(2.0 * PI * i as f64 / q as f64);
        }
    }
    let mut cells: Vec<(f64, f64, f64)> = Vec::with_capacity(radii.len() * phases.len());
    for &r in &radii {
        for &th in &phases {
            cells.push((score(p, r, th), r, th));
        }
    }
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    cells.truncate(CANDIDATES);
    let spent = radii.len() * phases.len();
    let per_ascent = budget.saturating_sub(spent) / CANDIDATES.max(1);
    let mut out: Vec<(f64, f64, f64)> = cells
        .into_iter()
        .map(|(s, r, th)| ascend(p, r, th, s, per_ascent.max(40)))
        .collect();
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    out.into_iter().map(|(_, r, th)| (r, th)).collect()
}

fn ascend(p: &[f64], mut r: f64, mut th: f64, mut best: f64, evals: usize) -> (f64, f64, f64) {
    let mut step_u = 0.25;
    let mut step_t = 0.1;
    let mut used = 0;
    while used + 4 <= evals && (step_u > 1e-13 || step_t > 1e-13) {
        let mut moved = false;
        for (du, dt) in [(step_u, 0.0), (-step_u, 0.0), (0.0, step_t), (0.0, -step_t)] {
            let nr = (r.ln() + du).exp().min(1.0);
            let nt = (th + dt).clamp(1e-12, PI);
            let s = score(p, nr, nt);
            used += 1;
            if s > best {
                best = s;
                r = nr;
                th = nt;
                moved = true;
                break;
            }
        }
        if !moved {
            step_u *= 0.5;
            step_t *= 0.5;
        }
    }
    (best, r, th)
}

/// Exact check of `f(r) < 0` or `gap(r, t) < 0` at `z = r e^{i arccos t}`.
pub(crate) fn verify_point(f: &SparsePolynomial, gap: &BiPoly, r: Rat, t: Rat) -> Option<Witness> {
    if !r.is_positive() || t >= Rat::one() || t < -Rat::one() {
        return None;
    }
    let fr = f.eval_rational(&r);
    let g = gap.eval(&r, &t);
    if !(fr.is_negative() || g.is_negative()) {
        return None;
    }
    let abs2 = &fr * &fr - &g;
    Some(build_witness(r, Some(t), &fr, &abs2, false))
}

/// Re-checks a strict witness of `f` in exact arithmetic.
pub fn verify_witness(f: &SparsePolynomial, w: &Witness) -> bool {
    match (&w.cos_theta, w.equality) {
        (Some(t), false) => {
            let gap = gap_expansion(f).bivariate();
            verify_point(f, &gap, w.r.clone(), t.clone()).is_some()
        }
        _ => false,
    }
}

fn build_witness(r: Rat, t: Option<Rat>, fr: &Rat, abs2: &Rat, equality: bool) -> Witness {
    let rf = rat_to_f64(&r);
    let theta = match &t {
        Some(t) => rat_to_f64(t).clamp(-1.0, 1.0).acos(),
        None => 0.0,
    };
    let f_abs_z = rat_to_f64(fr);
    let abs_f_z = rat_to_f64(abs2).max(0.0).sqrt();
    let (margin, error_bound) = if equality {
        (0.0, 0.0)
    } else {
        let m = abs_f_z - f_abs_z;
        (
            m,
            4.0 * f64::EPSILON * (abs_f_z + f_abs_z.abs()) + f64::MIN_POSITIVE,
        )
    };
    Witness {
        cos_theta: t,
        theta,
        z_re: rf * theta.cos(),
        z_im: rf * theta.sin(),
        r,
        f_abs_z,
        abs_f_z,
        margin,
        error_bound,
        equality,
    }
}

/// `f = z^k g(z^l)` with `l >= 2`, or a monomial: `|f(z)| = |f(|z|)|` at
/// `θ = 2π/l` (or `θ = π`).
pub fn equality_witness(f: &SparsePolynomial) -> Option<Witness> {
    if f.is_zero() {
        return None;
    }
    let l = if f.num_terms() == 1 {
        2
    } else {
        let dec = f.primitive_decompose().ok()?;
        if dec.stride_l < 2 {
            return None;
        }
        dec.stride_l
    };
    let theta = 2.0 * PI / l as f64;
    let cos_theta = match l {
        2 => Some(-Rat::one()),
        3 => Some(Rat::new((-1).into(), 2.into())),
        4 => Some(Rat::zero()),
        6 => Some(Rat::new(1.into(), 2.into())),
        _ => None,
    };
    let fr = f.eval_rational(&Rat::one());
    let abs2 = &fr * &fr;
    let mut w = build_witness(Rat::one(), cos_theta, &fr, &abs2, !fr.is_negative());
    w.theta = theta;
    w.z_re = theta.cos();
    w.z_im = theta.sin();
    Some(w)
}
