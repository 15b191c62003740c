//! Random inputs shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use padset::{Ball, CharTerm, CyclotomicNumber, LCFunction, PAdicRational, Prime};
use rand::Rng;

/// `n / p^k` with `0 <= n < p^{k + extra}`.
pub fn random_point(rng: &mut impl Rng, p: Prime, max_den_exp: u32, extra: u32) -> PAdicRational {
    let k = rng.gen_range(0..=max_den_exp);
    let n = rng.gen_range(0..p.get().pow(k + extra));
    PAdicRational::new(BigRational::new(BigInt::from(n), p.pow(k)), p)
}

/// Random element of `Z[ζ_{p^2}]` with small coefficients.
pub fn random_coef(rng: &mut impl Rng, p: Prime) -> CyclotomicNumber {
    let mut c = CyclotomicNumber::zero(p);
    for _ in 0..rng.gen_range(1..=2) {
        let e = BigInt::from(rng.gen_range(0..p.get() * p.get()));
        let w = BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
        c = &c + &CyclotomicNumber::root_of_unity(p, 2, &e).scale(&w);
    }
    c
}

/// Up to `max_terms` terms with supports inside `B_3(0)`, radii at least
/// `-3` and modulations with `|t|_p <= p^3`, so every function is constant
/// on balls of radius `p^{-3}`.
pub fn random_function(rng: &mut impl Rng, p: Prime, max_terms: usize) -> LCFunction {
    let n = rng.gen_range(1..=max_terms);
    let terms = (0..n).map(|_| {
        let radius = rng.gen_range(-3i64..=3);
        let center = random_point(rng, p, 3, 1).reduce_mod_ball(-3);
        let t = random_point(rng, p, 3, 0);
        CharTerm::new(random_coef(rng, p), t, Ball::new(center, radius))
    });
    LCFunction::from_terms(p, terms.collect::<Vec<_>>()).unwrap()
}
