//! Seeded random rationals for generic choices.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Rational;

/// Nonzero rational `p/q` with `|p|, q <= height`.
pub fn random_rational(rng: &mut ChaCha8Rng, height: i64) -> Rational {
    let mut p = 0;
    while p == 0 {
        p = rng.random_range(-height..=height);
    }
    let q = rng.random_range(1..=height);
    Rational::new(BigInt::from(p), BigInt::from(q))
}
