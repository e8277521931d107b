//! Closed `f64` intervals with outward rounding.
//!
//! Every operation widens its result by one ulp in each direction with
//! `next_down` / `next_up`, which keeps the enclosure sound without
//! touching the FPU rounding mode.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn zero() -> Self {
        Self::point(0.0)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Self { lo, hi }
        } else {
            // Both are sound enclosures, so an empty meet only arises from
            // NaN-free rounding slop; keep the tighter of the two.
            if self.width() <= other.width() {
                *self
            } else {
                *other
            }
        }
    }

    /// Hull of `self` and `other`.
    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Interval for `x^n` with `n >= 0`.
    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Interval::point(1.0);
        if n == 0 {
            return acc;
        }
        if n % 2 == 0 && self.lo < 0.0 && self.hi > 0.0 {
            let m = self.lo.abs().max(self.hi.abs());
            let up = Interval::point(m).powi(n);
            return Interval::new(0.0, up.hi);
        }
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }
}

fn down(x: f64) -> f64 {
    if x == 0.0 {
        // Exact zero needs no widening on this side.
        x
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x == 0.0 {
        x
    } else {
        x.next_up()
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        let lo = self.lo + o.lo;
        let hi = self.hi + o.hi;
        // Sums of exact values can only be exact when one operand is zero.
        let exact_lo = self.lo == 0.0 || o.lo == 0.0;
        let exact_hi = self.hi == 0.0 || o.hi == 0.0;
        Interval {
            lo: if exact_lo { lo } else { lo.next_down() },
            hi: if exact_hi { hi } else { hi.next_up() },
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        self + (-o)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let p = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let mut lo = p[0];
        let mut hi = p[0];
        for &x in &p[1..] {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, o: f64) -> Interval {
        self * Interval::point(o)
    }
}
