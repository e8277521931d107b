//! Phase sets `T` and `T*` at a rational phase `φ = 2π p / q`.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseSets {
    /// `j >= 1` in the support with `e^{ijφ} != 1`.
    pub t_set: BTreeSet<u64>,
    /// `j >= 1` in the support with `e^{ijφ} = 1`.
    pub t_star_set: BTreeSet<u64>,
    pub t0: Option<u64>,
    pub t_star: Option<u64>,
}

/// `phi = (p, q)` stands for `2π p / q`.
pub fn phase_sets(f: &SparsePolynomial, phi: (u64, u64)) -> Result<PhaseSets> {
    let (p, q) = phi;
    if q == 0 {
        return Err(Error::Input("phase denominator must be positive".into()));
    }
    let q = q / p.gcd(&q).max(1);
    let mut t_set = BTreeSet::new();
    let mut t_star_set = BTreeSet::new();
    for j in f.support().filter(|&j| j >= 1) {
        if j % q == 0 {
            t_star_set.insert(j);
        } else {
            t_set.insert(j);
        }
    }
    if t_set.is_empty() {
        return Err(Error::EmptyPhaseSet);
    }
    Ok(PhaseSets {
        t0: t_set.first().copied(),
        t_star: t_star_set.first().copied(),
        t_set,
        t_star_set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn f(terms: &[(u64, i64)]) -> SparsePolynomial {
        SparsePolynomial::from_int_terms(terms)
    }

    #[test]
    fn examples() {
        let g = f(&[(0, 1), (2, 1), (3, 1)]);
        let s = phase_sets(&g, (1, 2)).unwrap();
        assert_eq!(s.t_set, BTreeSet::from([3]));
        assert_eq!(s.t_star_set, BTreeSet::from([2]));
        assert_eq!((s.t0, s.t_star), (Some(3), Some(2)));

        let s = phase_sets(&g, (1, 3)).unwrap();
        assert_eq!((s.t0, s.t_star), (Some(2), Some(3)));

        for (p, q) in [(1, 2), (1, 3), (2, 5), (3, 7)] {
            let s = phase_sets(&f(&[(0, 1), (1, 1)]), (p, q)).unwrap();
            assert_eq!(s.t_set, BTreeSet::from([1]));
            assert!(s.t_star_set.is_empty());
        }
    }

    #[test]
    fn non_primitive_input_is_rejected() {
        assert_eq!(
            phase_sets(&f(&[(0, 1), (4, 1)]), (1, 4)),
            Err(Error::EmptyPhaseSet)
        );
        assert_eq!(
            phase_sets(&f(&[(0, 1), (4, 1)]), (1, 2)),
            Err(Error::EmptyPhaseSet)
        );
        assert!(phase_sets(&f(&[(0, 1), (4, 1)]), (1, 3)).is_ok());
        // 2π·2/2 is a full turn
        assert_eq!(
            phase_sets(&f(&[(0, 1), (1, 1)]), (2, 2)),
            Err(Error::EmptyPhaseSet)
        );
    }

    #[test]
    fn divisibility_matches_numeric_phase() {
        let g = f(&[
            (0, 1),
            (1, 2),
            (2, -1),
            (3, 1),
            (4, 1),
            (5, 1),
            (6, 3),
            (8, 1),
            (9, 1),
            (12, 1),
        ]);
        for q in 2..=13u64 {
            for p in 1..q {
                let s = phase_sets(&g, (p, q)).unwrap();
                let phi = 2.0 * std::f64::consts::PI * p as f64 / q as f64;
                for j in g.support().filter(|&j| j >= 1) {
                    let w = Complex64::from_polar(1.0, j as f64 * phi);
                    let is_one = (w - 1.0).norm() < 1e-9;
                    assert_eq!(is_one, s.t_star_set.contains(&j), "p={p} q={q} j={j}");
                    assert_eq!(!is_one, s.t_set.contains(&j));
                }
            }
        }
    }
}
