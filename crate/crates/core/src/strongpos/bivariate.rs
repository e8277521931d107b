//! Bivariate polynomials in `(r, t)`: exact rational form and an interval
//! form for box enclosures.

use num_traits::Zero;

use crate::interval::Interval;
use crate::rational::{enclose, Rat};

/// `coeffs[i][j]` multiplies `r^i t^j`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BiPoly {
    pub coeffs: Vec<Vec<Rat>>,
}

impl BiPoly {
    pub fn is_zero(&self) -> bool {
        self.coeffs
            .iter()
            .all(|row| row.iter().all(|c| c.is_zero()))
    }

    /// Adds `s * r^i * p(t)`.
    pub fn add_row(&mut self, i: usize, p: &[Rat], s: &Rat) {
        if self.coeffs.len() <= i {
            self.coeffs.resize(i + 1, Vec::new());
        }
        let row = &mut self.coeffs[i];
        if row.len() < p.len() {
            row.resize(p.len(), Rat::zero());
        }
        for (a, c) in row.iter_mut().zip(p) {
            *a += c * s;
        }
    }

    pub fn eval(&self, r: &Rat, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for row in self.coeffs.iter().rev() {
            let v = row.iter().rev().fold(Rat::zero(), |a, c| a * t + c);
            acc = acc * r + v;
        }
        acc
    }

    pub fn eval_f64(&self, r: f64, t: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.coeffs.iter().rev() {
            let v = row
                .iter()
                .rev()
                .fold(0.0, |a, c| a * t + crate::rational::rat_to_f64(c));
            acc = acc * r + v;
        }
        acc
    }

    pub fn d_dr(&self) -> BiPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, row)| {
                row.iter()
                    .map(|c| c * Rat::from_integer((i as i64).into()))
                    .collect()
            })
            .collect();
        BiPoly { coeffs }
    }

    pub fn d_dt(&self) -> BiPoly {
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(j, c)| c * Rat::from_integer((j as i64).into()))
                    .collect()
            })
            .collect();
        BiPoly { coeffs }
    }
}

#[derive(Clone, Debug)]
struct IntervalPoly {
    coeffs: Vec<Vec<Interval>>,
}

impl IntervalPoly {
    fn from_exact(p: &BiPoly) -> Self {
        let coeffs = p
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        let (lo, hi) = enclose(c);
                        Interval::new(lo, hi)
                    })
                    .collect()
            })
            .collect();
        Self { coeffs }
    }

    fn horner(&self, r: Interval, t: Interval) -> Interval {
        let mut acc = Interval::zero();
        for row in self.coeffs.iter().rev() {
            let mut v = Interval::zero();
            for c in row.iter().rev() {
                v = v * t + *c;
            }
            acc = acc * r + v;
        }
        acc
    }
}

/// Interval enclosure of a bivariate polynomial over boxes: the natural
/// Horner extension intersected with the mean-value form.
#[derive(Clone, Debug)]
pub struct BoxEvaluator {
    value: IntervalPoly,
    dr: IntervalPoly,
    dt: IntervalPoly,
}

impl BoxEvaluator {
    pub fn new(p: &BiPoly) -> Self {
        Self {
            value: IntervalPoly::from_exact(p),
            dr: IntervalPoly::from_exact(&p.d_dr()),
            dt: IntervalPoly::from_exact(&p.d_dt()),
        }
    }

    pub fn enclose(&self, r: Interval, t: Interval) -> Interval {
        let natural = self.value.horner(r, t);
        if natural.lo > 0.0 || natural.hi < 0.0 {
            return natural;
        }
        let (rc, tc) = (r.mid(), t.mid());
        let center = self.value.horner(Interval::point(rc), Interval::point(tc));
        let gr = self.dr.horner(r, t);
        let gt = self.dt.horner(r, t);
        let mv = center + gr * (r - Interval::point(rc)) + gt * (t - Interval::point(tc));
        natural.intersect(&mv)
    }

    pub fn point(&self, r: f64, t: f64) -> Interval {
        self.value.horner(Interval::point(r), Interval::point(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::rational::rat_from_f64;
    use proptest::prelude::*;

    fn sample() -> BiPoly {
        // 1 - 3 r t + r^2 t^2 / 7 - r^3
        let mut p = BiPoly::default();
        p.add_row(0, &[rat(1, 1)], &rat(1, 1));
        p.add_row(1, &[rat(0, 1), rat(-3, 1)], &rat(1, 1));
        p.add_row(2, &[rat(0, 1), rat(0, 1), rat(1, 7)], &rat(1, 1));
        p.add_row(3, &[rat(-1, 1)], &rat(1, 1));
        p
    }

    #[test]
    fn exact_evaluation_and_derivatives() {
        let p = sample();
        assert_eq!(
            p.eval(&rat(1, 2), &rat(-1, 1)),
            rat(1, 1) + rat(3, 2) + rat(1, 28) - rat(1, 8)
        );
        let dr = p.d_dr();
        assert_eq!(
            dr.eval(&rat(1, 1), &rat(1, 1)),
            rat(-3, 1) + rat(2, 7) - rat(3, 1)
        );
        let dt = p.d_dt();
        assert_eq!(dt.eval(&rat(1, 1), &rat(1, 1)), rat(-3, 1) + rat(2, 7));
    }

    proptest! {
        #[test]
        fn box_enclosure_contains_samples(
            r0 in 0.0f64..1.0, rw in 0.0f64..0.5, t0 in -1.0f64..1.0, tw in 0.0f64..1.0,
            fr in 0.0f64..=1.0, ft in 0.0f64..=1.0,
        ) {
            let p = sample();
            let e = BoxEvaluator::new(&p);
            let rb = Interval::new(r0, r0 + rw);
            let tb = Interval::new(t0, t0 + tw);
            let enc = e.enclose(rb, tb);
            let r = r0 + fr * rw;
            let t = t0 + ft * tw;
            let exact = p.eval(&rat_from_f64(r), &rat_from_f64(t));
            prop_assert!(rat_from_f64(enc.lo) <= exact && exact <= rat_from_f64(enc.hi));
        }
    }
}
