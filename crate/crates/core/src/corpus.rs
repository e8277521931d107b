//! Seeded random test polynomials.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::poly::{rat, SparsePolynomial};

/// Non-constant polynomial of degree at most `max_degree` with
/// coefficients in `{-2, …, 2} / 2`.
pub fn random_polynomial<R: Rng>(rng: &mut R, max_degree: u64) -> SparsePolynomial {
    assert!(max_degree >= 1);
    loop {
        let d = rng.gen_range(1..=max_degree);
        let terms = (0..=d).map(|e| (e as i64, rat(rng.gen_range(-2..=2), 2)));
        let f = SparsePolynomial::from_term_list(terms).expect("valid terms");
        if f.degree().is_some_and(|deg| deg >= 1) {
            return f;
        }
    }
}

pub fn corpus(seed: u64, count: usize, max_degree: u64) -> Vec<SparsePolynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_polynomial(&mut rng, max_degree))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_bounded() {
        let a = corpus(7, 50, 6);
        assert_eq!(a, corpus(7, 50, 6));
        assert_ne!(a, corpus(8, 50, 6));
        for f in &a {
            let d = f.degree().unwrap();
            assert!((1..=6).contains(&d));
            for (_, c) in f.terms() {
                let twice = c * rat(2, 1);
                assert!(twice.is_integer() && twice.numer().magnitude() <= &2u32.into());
            }
        }
    }
}
