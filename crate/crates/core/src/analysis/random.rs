//! Random valid triples for tests and audits.

use num_bigint::BigInt;
use rand::Rng;

use crate::partition::DensityTriple;
use crate::qfield::{QuadExpr, Rational};

/// A random valid triple `alpha = sqrt(2)*p1/q1`, `beta = sqrt(3)*p2/q2` with
/// denominators up to `max_den`, rejection-sampled until the ordering
/// conditions hold. `1, alpha, beta` are always linearly independent.
pub fn random_triple<R: Rng + ?Sized>(rng: &mut R, max_den: u32) -> DensityTriple {
    assert!(max_den >= 4, "denominators below 4 leave no valid triple");
    loop {
        let pick = |rng: &mut R, d: u64| {
            let q = rng.gen_range(2..=max_den);
            let p = rng.gen_range(1..q);
            QuadExpr::term(Rational::new(BigInt::from(p), BigInt::from(q)), d).expect("small radicand")
        };
        let alpha = pick(rng, 2);
        let beta = pick(rng, 3);
        if let Ok(t) = DensityTriple::new(alpha, beta) {
            return t;
        }
    }
}
