//! Seeded test symbols.
//!
//! Each consumer draws from its own ChaCha stream of the run seed, so adding
//! draws in one place never shifts the numbers seen elsewhere.

use hardy_core::circle::{FourierSeries, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn unit(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// Coefficients uniform in `[−1, 1]²` on `lo..=hi`.
pub fn random_symbol(rng: &mut impl Rng, lo: i64, hi: i64) -> FourierSeries {
    FourierSeries::from_pairs((lo..=hi).map(|n| (n, unit(rng)))).compact()
}

/// `c·∏(1 − z/z_i)` with roots `1.5 ≤ |z_i| ≤ 3`: analytic and zero-free on
/// the closed disc.
pub fn zero_free_polynomial(rng: &mut impl Rng, degree: usize) -> FourierSeries {
    let mut coeffs = vec![unit(rng) + C64::new(2.0, 0.0)];
    for _ in 0..degree {
        let root = C64::from_polar(rng.gen_range(1.5..=3.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let mut next = vec![C64::default(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c / root;
        }
        coeffs = next;
    }
    FourierSeries::from_dense(0, &coeffs)
}

/// Coefficient convolution `p·q`.
pub fn polynomial_product(p: &FourierSeries, q: &FourierSeries) -> FourierSeries {
    let mut out = FourierSeries::zero();
    for (i, a) in p.iter() {
        for (j, b) in q.iter() {
            out.add_to(i + j, a * b);
        }
    }
    out
}

/// Complex samples uniform in `[−1, 1]²`.
pub fn random_samples(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| unit(rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use hardy_core::circle::{make_grid, synthesize};

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = random_symbol(&mut rng(4, 1), -2, 2);
        assert_eq!(a, random_symbol(&mut rng(4, 1), -2, 2));
        assert_ne!(a, random_symbol(&mut rng(4, 2), -2, 2));
    }

    #[test]
    fn zero_free_polynomials_stay_away_from_zero() {
        let ctx = make_grid(256).unwrap();
        for s in 0..10 {
            let p = zero_free_polynomial(&mut rng(s, 0), 4);
            assert_eq!((p.min_index(), p.max_index()), (Some(0), Some(4)));
            let min = synthesize(&p, &ctx).unwrap().moduli().into_iter().fold(f64::INFINITY, f64::min);
            assert!(min > 0.0);
        }
    }
}
