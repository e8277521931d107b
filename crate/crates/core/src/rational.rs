//! Helpers around `BigRational`: float conversion, rigorous enclosures,
//! logarithms of huge values, serde as strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Smallest `f64` interval `[lo, hi]` that provably contains `x`.
pub fn enclose(x: &Rat) -> (f64, f64) {
    let approx = rat_to_f64(x);
    if !approx.is_finite() {
        return if x.is_negative() {
            (f64::NEG_INFINITY, f64::MIN)
        } else {
            (f64::MAX, f64::INFINITY)
        };
    }
    let exact = Rat::from_float(approx).expect("finite float");
    if &exact == x {
        (approx, approx)
    } else if &exact < x {
        (approx, approx.next_up())
    } else {
        (approx.next_down(), approx)
    }
}

/// Rounds `x` to the nearest value with at most `bits` significant bits.
pub fn round_to_bits(x: &Rat, bits: u32) -> Rat {
    if x.is_zero() || bits == 0 {
        return x.clone();
    }
    let num = x.numer().abs();
    let den = x.denom().clone();
    // Exponent e with 2^(e-1) <= |x| < 2^(e+1) roughly.
    let e = num.bits() as i64 - den.bits() as i64;
    let shift = bits as i64 - e;
    let scaled = if shift >= 0 {
        (num << shift as usize, den)
    } else {
        (num, den << (-shift) as usize)
    };
    let q = (Rat::new(scaled.0, scaled.1) + Rat::new(BigInt::one(), BigInt::from(2))).floor();
    let mut r = if shift >= 0 {
        q / Rat::from_integer(BigInt::one() << shift as usize)
    } else {
        q * Rat::from_integer(BigInt::one() << (-shift) as usize)
    };
    if x.is_negative() {
        r = -r;
    }
    r
}

/// Natural logarithm of a positive big integer.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "logarithm of a non-positive integer");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift as usize;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of `|x|` for a nonzero rational.
pub fn ln_abs(x: &Rat) -> f64 {
    ln_bigint(&x.numer().abs()) - ln_bigint(x.denom())
}

pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float")
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Serializes rationals as `"p/q"` (or `"p"`) strings.
pub mod serde_rat {
    use super::Rat;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub mod option {
        use super::Rat;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(x: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.serialize_str(&v.to_string()),
                None => s.serialize_none(),
            }
        }
    }
}
