//! The modulus gap `f(r)^2 - |f(r e^{iθ})|^2` as an exact polynomial in
//! `r` and `t = cos θ`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::bivariate::BiPoly;
use super::chebyshev::{self, TPoly};
use crate::poly::SparsePolynomial;
use crate::rational::{rat_to_f64, Rat};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapTerm {
    pub pair: (u64, u64),
    #[serde(with = "crate::rational::serde_rat")]
    pub product: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapExpansion {
    /// `j -> [(p, q), a_p a_q]` over ordered pairs `p != q`, `p + q = j`.
    pub coefficients: BTreeMap<u64, Vec<GapTerm>>,
    /// `j -> Σ a_p a_q (1 - T_{|p-q|}(t))`, ascending in `t`.
    pub chebyshev_form: BTreeMap<u64, TPoly>,
}

pub fn gap_expansion(f: &SparsePolynomial) -> GapExpansion {
    let terms: Vec<(u64, Rat)> = f.terms().map(|(e, c)| (e, c.clone())).collect();
    let span = match (f.low_degree(), f.degree()) {
        (Some(lo), Some(hi)) => (hi - lo) as usize,
        _ => 0,
    };
    let table = chebyshev::chebyshev_table(span);
    let mut coefficients: BTreeMap<u64, Vec<GapTerm>> = BTreeMap::new();
    let mut chebyshev_form: BTreeMap<u64, TPoly> = BTreeMap::new();
    for (p, ap) in &terms {
        for (q, aq) in &terms {
            if p == q {
                continue;
            }
            let product = ap * aq;
            let j = p + q;
            let n = p.abs_diff(*q) as usize;
            let entry = chebyshev_form.entry(j).or_default();
            chebyshev::add_scaled(entry, &chebyshev::one_minus_t(&table, n), &product);
            coefficients.entry(j).or_default().push(GapTerm {
                pair: (*p, *q),
                product,
            });
        }
    }
    for v in chebyshev_form.values_mut() {
        *v = chebyshev::trim(std::mem::take(v));
    }
    GapExpansion {
        coefficients,
        chebyshev_form,
    }
}

impl GapExpansion {
    /// Trigonometric form evaluated in `f64`.
    pub fn eval_trig(&self, r: f64, theta: f64) -> f64 {
        let mut acc = 0.0;
        for (j, list) in &self.coefficients {
            let rj = r.powi(*j as i32);
            for term in list {
                let n = term.pair.0.abs_diff(term.pair.1) as f64;
                let s = (0.5 * n * theta).sin();
                acc += rat_to_f64(&term.product) * rj * 2.0 * s * s;
            }
        }
        acc
    }

    /// The gap itself as a polynomial in `(r, t)`.
    pub fn bivariate(&self) -> BiPoly {
        let mut out = BiPoly::default();
        let one = Rat::from_integer(1.into());
        for (j, p) in &self.chebyshev_form {
            out.add_row(*j as usize, p, &one);
        }
        out
    }

    /// Least `j` with a nonzero Chebyshev entry.
    pub fn min_degree(&self) -> Option<u64> {
        self.chebyshev_form
            .iter()
            .find(|(_, p)| !p.is_empty())
            .map(|(j, _)| *j)
    }

    /// `gap / (r^{j0} (1 - t))`.
    pub fn reduced(&self) -> Option<BiPoly> {
        let j0 = self.min_degree()?;
        let one = Rat::from_integer(1.into());
        let mut out = BiPoly::default();
        for (j, p) in &self.chebyshev_form {
            if p.is_empty() {
                continue;
            }
            out.add_row((j - j0) as usize, &chebyshev::divide_one_minus_t(p), &one);
        }
        Some(out)
    }

    /// Splits the gap at the phases `2π·i/q` as
    /// `gap = r^{j0} [(1 - T_q(t)) V + r^{t0 - j0} N]`,
    /// where `V` collects pairs with `q | p - p'` and `N` the rest.
    /// Returns `None` when some pair in `N` has total degree below `t0`.
    pub fn phase_split(&self, q: u64, t0: u64) -> Option<PhaseSplit> {
        let j0 = self.min_degree()?;
        if t0 < j0 {
            return None;
        }
        let max_diff = self
            .coefficients
            .values()
            .flatten()
            .map(|t| t.pair.0.abs_diff(t.pair.1))
            .max()
            .unwrap_or(0) as usize;
        let table = chebyshev::chebyshev_table(max_diff.max(q as usize));
        let base = chebyshev::one_minus_t(&table, q as usize);
        let mut v = BiPoly::default();
        let mut n = BiPoly::default();
        let mut quotients: BTreeMap<usize, TPoly> = BTreeMap::new();
        for (j, list) in &self.coefficients {
            for term in list {
                let diff = term.pair.0.abs_diff(term.pair.1);
                if diff % q == 0 {
                    let quot = quotients.entry(diff as usize).or_insert_with(|| {
                        chebyshev::divide_exact(
                            &chebyshev::one_minus_t(&table, diff as usize),
                            &base,
                        )
                        .expect("1 - T_q divides 1 - T_{kq}")
                    });
                    v.add_row((j - j0) as usize, quot, &term.product);
                } else {
                    if *j < t0 {
                        return None;
                    }
                    let p = chebyshev::one_minus_t(&table, diff as usize);
                    n.add_row((j - t0) as usize, &p, &term.product);
                }
            }
        }
        Some(PhaseSplit { q, t0, j0, v, n })
    }
}

#[derive(Clone, Debug)]
pub struct PhaseSplit {
    pub q: u64,
    pub t0: u64,
    pub j0: u64,
    pub v: BiPoly,
    pub n: BiPoly,
}

impl PhaseSplit {
    /// Recombines into the full gap at `(r, t)`.
    pub fn recombine(&self, r: &Rat, t: &Rat) -> Rat {
        let table = chebyshev::chebyshev_table(self.q as usize);
        let base = chebyshev::one_minus_t(&table, self.q as usize);
        let rj0 = crate::poly::pow_rat(r, self.j0);
        let rt = crate::poly::pow_rat(r, self.t0 - self.j0);
        rj0 * (chebyshev::eval(&base, t) * self.v.eval(r, t) + rt * self.n.eval(r, t))
    }
}

/// Direct `f(r)^2 - |f(r e^{iθ})|^2` via complex evaluation.
pub fn gap_direct(f: &SparsePolynomial, r: f64, theta: f64) -> f64 {
    let fr = f.evaluate(num_complex::Complex64::new(r, 0.0)).value.re;
    let fz = f
        .evaluate(num_complex::Complex64::from_polar(r, theta))
        .value;
    fr * fr - fz.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::strongpos::chebyshev::one_minus_t;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn tpoly(v: &[i64]) -> TPoly {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn linear_example() {
        let g = gap_expansion(&SparsePolynomial::from_int_terms(&[(0, 1), (1, 1)]));
        assert_eq!(g.coefficients.len(), 1);
        assert_eq!(g.chebyshev_form[&1], tpoly(&[2, -2]));
        assert_eq!(g.coefficients[&1].len(), 2);
    }

    #[test]
    fn sparse_example() {
        let g = gap_expansion(&SparsePolynomial::from_int_terms(&[(0, 1), (2, 1), (3, 1)]));
        assert_eq!(
            g.chebyshev_form.keys().copied().collect::<Vec<_>>(),
            vec![2, 3, 5]
        );
        let table = chebyshev::chebyshev_table(3);
        let twice = |n: usize| {
            one_minus_t(&table, n)
                .iter()
                .map(|c| c * rat(2, 1))
                .collect::<Vec<_>>()
        };
        assert_eq!(g.chebyshev_form[&2], twice(2));
        assert_eq!(g.chebyshev_form[&3], twice(3));
        assert_eq!(g.chebyshev_form[&5], twice(1));
        assert_eq!(g.min_degree(), Some(2));
    }

    #[test]
    fn reduced_form_times_factor_is_gap() {
        let f = SparsePolynomial::from_int_terms(&[(0, 2), (1, -1), (3, 4), (4, 1)]);
        let g = gap_expansion(&f);
        let full = g.bivariate();
        let red = g.reduced().unwrap();
        let j0 = g.min_degree().unwrap();
        for (r, t) in [
            (rat(1, 3), rat(1, 5)),
            (rat(2, 1), rat(-7, 9)),
            (rat(1, 2), rat(1, 1)),
        ] {
            let lhs = full.eval(&r, &t);
            let rhs = crate::poly::pow_rat(&r, j0) * (rat(1, 1) - &t) * red.eval(&r, &t);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn phase_split_recombines() {
        let f =
            SparsePolynomial::from_int_terms(&[(0, 1), (3, 1), (4, 1), (6, 1), (7, 1), (10, 1)])
                .sub(&SparsePolynomial::monomial(5, rat(1, 100)));
        let g = gap_expansion(&f);
        let full = g.bivariate();
        for q in [3u64] {
            let t0 = 4;
            let split = g.phase_split(q, t0).unwrap();
            for (r, t) in [
                (rat(1, 3), rat(1, 5)),
                (rat(3, 4), rat(-1, 2)),
                (rat(1, 10), rat(-1, 1)),
            ] {
                assert_eq!(split.recombine(&r, &t), full.eval(&r, &t));
            }
        }
    }

    fn arb_poly() -> impl Strategy<Value = SparsePolynomial> {
        prop::collection::vec(-5i64..=5, 1..8).prop_map(|v| {
            let terms: Vec<(i64, Rat)> = v
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as i64, rat(c, 2)))
                .collect();
            SparsePolynomial::from_term_list(terms).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn expansion_matches_direct_evaluation(f in arb_poly(), r in 0.05f64..2.0, th in 0.0f64..6.28) {
            let g = gap_expansion(&f);
            let direct = gap_direct(&f, r, th);
            let trig = g.eval_trig(r, th);
            let cheb = g.bivariate().eval_f64(r, th.cos());
            let scale = f.terms().map(|(e, c)| rat_to_f64(c).abs() * r.powi(e as i32)).sum::<f64>().powi(2);
            prop_assert!((direct - trig).abs() <= 1e-10 * scale.max(1e-300));
            prop_assert!((direct - cheb).abs() <= 1e-10 * scale.max(1e-300));
        }

        #[test]
        fn inversion_identity(f in arb_poly(), r in 0.1f64..1.0, th in 0.0f64..6.28) {
            prop_assume!(!f.is_zero() && !f.coeff(0).is_zero());
            let d = f.degree().unwrap() as i32;
            let rev = f.reverse().unwrap();
            let lhs = gap_direct(&f, 1.0 / r, th) * r.powi(2 * d);
            let rhs = gap_direct(&rev, r, th);
            let scale = rev.terms().map(|(e, c)| rat_to_f64(c).abs() * r.powi(e as i32)).sum::<f64>().powi(2);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * scale.max(1e-300));
        }

        #[test]
        fn chebyshev_entries_vanish_at_one(f in arb_poly()) {
            let g = gap_expansion(&f);
            for p in g.chebyshev_form.values() {
                prop_assert!(chebyshev::eval(p, &rat(1, 1)).is_zero());
            }
        }
    }
}
