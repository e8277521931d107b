//! Interval branch-and-bound certification of strong positivity.

use num_complex::Complex64;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::bivariate::BoxEvaluator;
use super::gap::gap_expansion;
use super::refute::{refute, refute_strict, verify_point};
use super::{
    CertificationStats, CornerStats, HalfStats, Status, StrongPositivityVerdict, Witness,
    DEFAULT_DEPTH_BUDGET, DEFAULT_REFUTE_BUDGET,
};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::poly::SparsePolynomial;
use crate::rational::rat_from_f64;

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub depth_budget: u32,
    pub max_boxes: u64,
    pub refute_budget: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            depth_budget: DEFAULT_DEPTH_BUDGET,
            max_boxes: 4_000_000,
            refute_budget: DEFAULT_REFUTE_BUDGET,
        }
    }
}

pub fn certify(f: &SparsePolynomial, depth_budget: u32) -> Result<StrongPositivityVerdict> {
    certify_with(
        f,
        &CertifyOptions {
            depth_budget,
            ..CertifyOptions::default()
        },
    )
}

pub fn certify_with(
    f: &SparsePolynomial,
    opts: &CertifyOptions,
) -> Result<StrongPositivityVerdict> {
    if f.is_zero() {
        return Err(Error::Input(
            "strong positivity of the zero polynomial".into(),
        ));
    }
    // Multiplying by z^k scales both sides by |z|^k.
    let h = f.shift_down(f.low_degree().unwrap());
    let screened = !h.is_constant()
        && h.is_primitive()
        && h.coeff(0).is_positive()
        && h.leading_coeff().unwrap().is_positive();
    if !screened {
        return Ok(after_exhaustion(
            f,
            opts,
            CertificationStats::default(),
            "precondition screen failed",
        ));
    }
    let rev = h.reverse()?;
    let mut stats = CertificationStats {
        min_margin: f64::INFINITY,
        ..CertificationStats::default()
    };
    let mut splits_used = Vec::new();
    for (side, p, inverted) in [("forward", &h, false), ("reverse", &rev, true)] {
        let half = Half::new(p);
        splits_used.extend(half.splits.iter().map(|s| s.q));
        let budget = opts.max_boxes.saturating_sub(stats.boxes_examined);
        let (outcome, hs) = half.run(side, opts.depth_budget, budget);
        stats.boxes_examined += hs.boxes;
        stats.max_depth = stats.max_depth.max(hs.max_depth);
        stats.min_margin = stats.min_margin.min(hs.min_margin);
        stats.halves.push(hs);
        match outcome {
            HalfOutcome::Certified => {}
            HalfOutcome::Negative(r, t) => {
                let gap = gap_expansion(f).bivariate();
                let rq = rat_from_f64(r);
                let rf = if inverted { rq.recip() } else { rq };
                if let Some(w) = verify_point(f, &gap, rf, rat_from_f64(t)) {
                    let best = match refute_strict(f, opts.refute_budget) {
                        Some(s) if relative_margin(&s) > relative_margin(&w) => s,
                        _ => w,
                    };
                    return Ok(verdict(
                        Status::Refuted,
                        Some(best),
                        stats,
                        strategy(&splits_used),
                    ));
                }
                return Ok(after_exhaustion(
                    f,
                    opts,
                    stats,
                    "negative cell failed exact verification",
                ));
            }
            HalfOutcome::Exhausted => {
                return Ok(after_exhaustion(
                    f,
                    opts,
                    stats,
                    "subdivision budget exhausted",
                ));
            }
        }
    }
    splits_used.sort_unstable();
    splits_used.dedup();
    Ok(verdict(
        Status::Certified,
        None,
        stats,
        strategy(&splits_used),
    ))
}

fn relative_margin(w: &Witness) -> f64 {
    w.margin / (w.abs_f_z + w.f_abs_z.abs()).max(f64::MIN_POSITIVE)
}

fn strategy(qs: &[u64]) -> String {
    let mut qs = qs.to_vec();
    qs.sort_unstable();
    qs.dedup();
    let corners = if qs.is_empty() {
        "no zeros of the reduced gap at r = 0".to_string()
    } else {
        format!(
            "zeros at r = 0, t = cos(2πi/q) discharged by phase splits for q ∈ {{{}}}",
            qs.iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    };
    format!(
        "r > 1 mapped to (0, 1] through the reversed polynomial; gap divided by r^k (1 - t) to remove \
         the forced zeros at r = 0 and θ = 0; {corners}"
    )
}

fn verdict(
    status: Status,
    witness: Option<Witness>,
    mut stats: CertificationStats,
    boundary_strategy: String,
) -> StrongPositivityVerdict {
    if !stats.min_margin.is_finite() {
        stats.min_margin = 0.0;
    }
    StrongPositivityVerdict {
        status,
        witness,
        certification_stats: stats,
        boundary_strategy,
    }
}

fn after_exhaustion(
    f: &SparsePolynomial,
    opts: &CertifyOptions,
    stats: CertificationStats,
    why: &str,
) -> StrongPositivityVerdict {
    match refute(f, opts.refute_budget) {
        Some(w) => verdict(
            Status::Refuted,
            Some(w),
            stats,
            format!("{why}; witness search succeeded"),
        ),
        None => verdict(
            Status::Inconclusive,
            None,
            stats,
            format!("{why}; no witness found"),
        ),
    }
}

struct Split {
    q: u64,
    t0: u64,
    v: BoxEvaluator,
    n: BoxEvaluator,
}

struct Half {
    reduced: BoxEvaluator,
    splits: Vec<Split>,
}

#[derive(Clone, Copy)]
struct Cell {
    r: Interval,
    t: Interval,
    depth: u32,
}

enum CellResult {
    Certified(f64),
    Corner(usize),
    Negative(f64, f64),
    Split([Cell; 4]),
    Exhausted,
}

enum HalfOutcome {
    Certified,
    Negative(f64, f64),
    Exhausted,
}

impl Half {
    fn new(p: &SparsePolynomial) -> Self {
        let gap = gap_expansion(p);
        let reduced = BoxEvaluator::new(&gap.reduced().unwrap_or_default());
        let k = p.support().find(|&e| e > 0).unwrap_or(0);
        let mut splits = Vec::new();
        for q in 2..=k {
            if k % q != 0 {
                continue;
            }
            let Some(t0) = p.support().find(|&e| e % q != 0) else {
                continue;
            };
            if let Some(s) = gap.phase_split(q, t0) {
                splits.push(Split {
                    q,
                    t0,
                    v: BoxEvaluator::new(&s.v),
                    n: BoxEvaluator::new(&s.n),
                });
            }
        }
        Self { reduced, splits }
    }

    fn examine(&self, c: &Cell, depth_budget: u32) -> CellResult {
        let enc = self.reduced.enclose(c.r, c.t);
        if enc.lo > 0.0 {
            return CellResult::Certified(enc.lo);
        }
        let (rc, tc) = (c.r.mid(), c.t.mid());
        if self.reduced.point(rc, tc).hi < 0.0 && rc > 0.0 && tc < 1.0 {
            return CellResult::Negative(rc, tc);
        }
        for (i, s) in self.splits.iter().enumerate() {
            if s.v.enclose(c.r, c.t).lo > 0.0 && s.n.enclose(c.r, c.t).lo > 0.0 {
                return CellResult::Corner(i);
            }
        }
        if c.depth >= depth_budget {
            return CellResult::Exhausted;
        }
        let (r0, r1) = (Interval::new(c.r.lo, rc), Interval::new(rc, c.r.hi));
        let (t0, t1) = (Interval::new(c.t.lo, tc), Interval::new(tc, c.t.hi));
        let d = c.depth + 1;
        CellResult::Split([
            Cell {
                r: r0,
                t: t0,
                depth: d,
            },
            Cell {
                r: r0,
                t: t1,
                depth: d,
            },
            Cell {
                r: r1,
                t: t0,
                depth: d,
            },
            Cell {
                r: r1,
                t: t1,
                depth: d,
            },
        ])
    }

    fn run(&self, side: &str, depth_budget: u32, max_boxes: u64) -> (HalfOutcome, HalfStats) {
        let mut stats = HalfStats {
            side: side.to_string(),
            min_margin: f64::INFINITY,
            corners: self
                .splits
                .iter()
                .map(|s| CornerStats {
                    q: s.q,
                    t0: s.t0,
                    ..CornerStats::default()
                })
                .collect(),
            ..HalfStats::default()
        };
        let mut frontier = vec![Cell {
            r: Interval::new(0.0, 1.0),
            t: Interval::new(-1.0, 1.0),
            depth: 0,
        }];
        while !frontier.is_empty() {
            if stats.boxes + frontier.len() as u64 > max_boxes {
                return (HalfOutcome::Exhausted, stats);
            }
            let results: Vec<CellResult> = frontier
                .par_iter()
                .map(|c| self.examine(c, depth_budget))
                .collect();
            let mut next = Vec::new();
            for (cell, res) in frontier.iter().zip(results) {
                stats.boxes += 1;
                stats.max_depth = stats.max_depth.max(cell.depth);
                match res {
                    CellResult::Certified(m) => stats.min_margin = stats.min_margin.min(m),
                    CellResult::Corner(i) => {
                        let cs = &mut stats.corners[i];
                        cs.boxes += 1;
                        cs.strip_radius = cs.strip_radius.max(cell.r.hi);
                        cs.strip_width = cs.strip_width.max(cell.t.width());
                    }
                    CellResult::Negative(r, t) => return (HalfOutcome::Negative(r, t), stats),
                    CellResult::Exhausted => return (HalfOutcome::Exhausted, stats),
                    CellResult::Split(children) => next.extend(children),
                }
            }
            frontier = next;
        }
        if !stats.min_margin.is_finite() {
            stats.min_margin = 0.0;
        }
        (HalfOutcome::Certified, stats)
    }
}

/// Largest `c` with `|f(r e^{iθ})| <= (1 - c r^d) f(r)` on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusMargin {
    pub c: f64,
    /// Smallest `(1 - c r^d) f(r) - |f(r e^{iθ})|` over the grid.
    pub min_residual: f64,
    pub grid_points: usize,
}

pub fn small_radius_margin(f: &SparsePolynomial, theta0: f64, r_max: f64) -> Result<RadiusMargin> {
    if !f.is_primitive() {
        return Err(Error::Precondition(
            "small-radius margin needs a primitive polynomial".into(),
        ));
    }
    if !(theta0 > 0.0 && theta0 < std::f64::consts::PI) || r_max <= 0.0 {
        return Err(Error::Input("need 0 < theta0 < π and r_max > 0".into()));
    }
    let d = f.degree().unwrap() as i32;
    let gap = gap_expansion(f);
    let radii: Vec<f64> = (1..=200)
        .map(|i| r_max * i as f64 / 200.0)
        .chain((1..=40).map(|e| r_max * 0.8f64.powi(e + 10)))
        .collect();
    let n_theta = 400;
    let span = std::f64::consts::PI - theta0;
    let mut c = f64::INFINITY;
    let mut points = Vec::with_capacity(radii.len() * (n_theta + 1));
    for &r in &radii {
        let fr = f.evaluate(Complex64::new(r, 0.0)).value.re;
        for j in 0..=n_theta {
            let th = theta0 + span * j as f64 / n_theta as f64;
            let fz = f.evaluate(Complex64::from_polar(r, th)).value.norm();
            // 1 - |f(z)|/f(r) = gap / (f(r) (f(r) + |f(z)|)), free of cancellation
            let ci = gap.eval_trig(r, th) / (fr * (fr + fz)) / r.powi(d);
            if fr <= 0.0 || !(ci > 0.0) {
                return Err(Error::InequalityViolated(format!(
                    "|f(z)| >= f(|z|) near r = {r:.3e}, θ = {th:.6}"
                )));
            }
            c = c.min(ci);
            points.push((r, fr, fz));
        }
    }
    let min_residual = points
        .iter()
        .map(|&(r, fr, fz)| (1.0 - c * r.powi(d)) * fr - fz)
        .fold(f64::INFINITY, f64::min);
    Ok(RadiusMargin {
        c,
        min_residual,
        grid_points: points.len(),
    })
}
