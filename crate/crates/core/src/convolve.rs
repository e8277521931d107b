//! Dense exact convolution of integer coefficient vectors.
//!
//! `schoolbook` is the reference; `karatsuba` is used above a size
//! threshold and must agree with it exactly.

use num_bigint::BigInt;
use num_traits::Zero;

const KARATSUBA_THRESHOLD: usize = 48;

pub fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Karatsuba multiplication; falls back to `schoolbook` for short inputs.
pub fn karatsuba(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    karatsuba_into(a, b, &mut out);
    out
}

fn karatsuba_into(a: &[BigInt], b: &[BigInt], out: &mut [BigInt]) {
    let n = a.len().min(b.len());
    if n < KARATSUBA_THRESHOLD {
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        return;
    }
    // Unbalanced: slice the longer operand into chunks of the shorter length.
    if a.len() != b.len() {
        let (long, short) = if a.len() > b.len() { (a, b) } else { (b, a) };
        let s = short.len();
        let mut start = 0;
        while start < long.len() {
            let end = (start + s).min(long.len());
            let part = karatsuba(&long[start..end], short);
            for (k, v) in part.into_iter().enumerate() {
                out[start + k] += v;
            }
            start = end;
        }
        return;
    }
    let half = n / 2;
    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half);
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let sa = add_vec(a0, a1);
    let sb = add_vec(b0, b1);
    let mut z1 = karatsuba(&sa, &sb);
    for (k, v) in z0.iter().enumerate() {
        z1[k] -= v;
    }
    for (k, v) in z2.iter().enumerate() {
        z1[k] -= v;
    }
    for (k, v) in z0.into_iter().enumerate() {
        out[k] += v;
    }
    for (k, v) in z1.into_iter().enumerate() {
        out[k + half] += v;
    }
    for (k, v) in z2.into_iter().enumerate() {
        out[k + 2 * half] += v;
    }
}

fn add_vec(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => BigInt::zero(),
        })
        .collect()
}

/// Product truncated to indices `0..=max_index`.
pub fn truncated(a: &[BigInt], b: &[BigInt], max_index: usize) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = (a.len() + b.len() - 1).min(max_index + 1);
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Dispatch used by the powering code.
pub fn multiply(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.len().min(b.len()) >= KARATSUBA_THRESHOLD {
        karatsuba(a, b)
    } else {
        schoolbook(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_products() {
        assert_eq!(schoolbook(&big(&[1, 1]), &big(&[1, 1])), big(&[1, 2, 1]));
        assert_eq!(truncated(&big(&[1, 1]), &big(&[1, 1]), 1), big(&[1, 2]));
        assert!(schoolbook(&[], &big(&[1])).is_empty());
    }

    proptest! {
        #[test]
        fn karatsuba_matches_schoolbook(
            a in prop::collection::vec(-50i64..50, 1..200),
            b in prop::collection::vec(-50i64..50, 1..200),
        ) {
            let (a, b) = (big(&a), big(&b));
            prop_assert_eq!(karatsuba(&a, &b), schoolbook(&a, &b));
        }
    }
}
