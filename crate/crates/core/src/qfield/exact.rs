//! Exact sign determination for integer combinations of square roots.
//!
//! Every comparison in the crate eventually reduces to the sign of
//! `c0 + c1*sqrt(d1) + c2*sqrt(d2)` with integer `ci` and distinct square-free
//! radicands. Zero is decided symbolically (1, sqrt(d1), sqrt(d2) are linearly
//! independent over the rationals), a rigorous floating-point filter settles
//! the common case, and the remainder goes through integer-square-root
//! interval refinement with doubling precision.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use super::QfError;

/// Hard ceiling on the refinement precision, in bits.
pub const MAX_PRECISION_BITS: u64 = 4096;

const START_PRECISION_BITS: u64 = 64;

/// Relative error budget of the floating filter. The filter evaluates at most
/// five correctly rounded operations, so the true error is below 1e-15 of the
/// magnitude sum; this leaves two orders of margin.
const FILTER_REL: f64 = 1e-13;

/// Integer types usable as coordinates of the exact kernels.
///
/// Implemented for `i128` (fast path, caller guarantees no overflow) and
/// `BigInt` (unbounded).
pub trait Coeff:
    Clone + Debug + PartialOrd + Ord + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
    fn to_big(&self) -> BigInt;
    fn approx(&self) -> f64;
}

impl Coeff for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn approx(&self) -> f64 {
        *self as f64
    }
}

impl Coeff for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Sign of `c0 + sum(ci * sqrt(di))`.
///
/// Radicands must be distinct, square-free and at least 2; terms with a zero
/// coefficient are ignored.
pub fn sign_radical_sum(c0: &BigInt, terms: &[(BigInt, u64)]) -> Result<Ordering, QfError> {
    let live: Vec<&(BigInt, u64)> = terms.iter().filter(|(c, _)| !c.is_zero()).collect();
    if live.is_empty() {
        return Ok(c0.sign_ord());
    }
    if let Some(ord) =
        float_filter(c0.to_f64().unwrap_or(f64::NAN), live.iter().map(|(c, d)| (c.to_f64().unwrap_or(f64::NAN), *d)))
    {
        return Ok(ord);
    }
    refine(c0, &live)
}

/// Floating-point filter: returns the sign when the approximation is far
/// enough from zero to be certain, `None` otherwise.
fn float_filter(c0: f64, terms: impl Iterator<Item = (f64, u64)>) -> Option<Ordering> {
    let mut approx = c0;
    let mut mag = c0.abs();
    for (c, d) in terms {
        let t = c * (d as f64).sqrt();
        approx += t;
        mag += t.abs();
    }
    if !approx.is_finite() || !mag.is_finite() {
        return None;
    }
    let bound = mag * FILTER_REL + f64::MIN_POSITIVE;
    if approx > bound {
        Some(Ordering::Greater)
    } else if approx < -bound {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// Interval refinement: at precision `k`, each `ci*sqrt(di)*2^k` is bracketed
/// by consecutive integers from an integer square root, so the scaled sum
/// lies in an interval of width at most 2 per term.
fn refine(c0: &BigInt, live: &[&(BigInt, u64)]) -> Result<Ordering, QfError> {
    let mut bits = START_PRECISION_BITS;
    loop {
        let base = c0 << bits;
        let mut lo = base.clone();
        let mut hi = base;
        for (c, d) in live {
            let radicand: BigInt = ((c * c) * BigInt::from(*d)) << (2 * bits);
            let s = radicand.sqrt();
            if c.is_positive() {
                lo += &s;
                hi += s + 1;
            } else {
                lo -= &s + 1;
                hi -= s;
            }
        }
        if lo.is_positive() {
            return Ok(Ordering::Greater);
        }
        if hi.is_negative() {
            return Ok(Ordering::Less);
        }
        if bits >= MAX_PRECISION_BITS {
            return Err(QfError::InternalPrecisionExceeded { bits });
        }
        bits = (bits * 2).min(MAX_PRECISION_BITS);
    }
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        match self.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// A radicand basis `{1, sqrt(d1), sqrt(d2)}`; an absent radicand is 0 and
/// its coordinate must stay zero.
#[derive(Clone, Copy, Debug)]
pub struct Basis {
    radicands: [u64; 2],
    roots: [f64; 2],
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.radicands == other.radicands
    }
}

impl Eq for Basis {}

impl Basis {
    /// `radicands` must be sorted, distinct, square-free and >= 2, except
    /// that trailing entries may be 0 (absent).
    pub fn new(radicands: [u64; 2]) -> Self {
        let roots = radicands.map(|d| (d as f64).sqrt());
        Basis { radicands, roots }
    }

    pub fn radicands(&self) -> [u64; 2] {
        self.radicands
    }

    pub fn approx<T: Coeff>(&self, c: &[T; 3]) -> f64 {
        c[0].approx() + c[1].approx() * self.roots[0] + c[2].approx() * self.roots[1]
    }

    /// Exact sign of `c0 + c1*sqrt(d1) + c2*sqrt(d2)`.
    ///
    /// Panics with `InternalPrecisionExceeded` if refinement hits the
    /// precision ceiling, which requires coefficients of roughly a thousand
    /// bits.
    pub fn sign<T: Coeff>(&self, c: &[T; 3]) -> Ordering {
        let terms = [(c[1].approx(), self.radicands[0]), (c[2].approx(), self.radicands[1])];
        if let Some(ord) = float_filter(c[0].approx(), terms.into_iter().filter(|(c, _)| *c != 0.0)) {
            return ord;
        }
        let mut big_terms = Vec::with_capacity(2);
        for (coef, d) in c[1..].iter().zip(self.radicands) {
            if !coef.is_zero() {
                debug_assert!(d >= 2, "coordinate on absent radicand");
                big_terms.push((coef.to_big(), d));
            }
        }
        match sign_radical_sum(&c[0].to_big(), &big_terms) {
            Ok(ord) => ord,
            Err(e) => panic!("{e}"),
        }
    }

    /// `floor(value(c) / q)` for `q > 0`.
    pub fn floor_div<T: Coeff>(&self, c: &[T; 3], q: &T) -> T {
        debug_assert!(q.is_positive());
        let est = self.approx(c) / q.approx();
        let mut k = if est.is_finite() { T::from_f64(est.floor()).unwrap_or_else(T::zero) } else { T::zero() };
        // value(c) - k*q >= 0 means k is not too large.
        let not_above = |k: &T| {
            let mut shifted = c.clone();
            shifted[0] = shifted[0].clone() - k.clone() * q.clone();
            self.sign(&shifted) != Ordering::Less
        };
        if not_above(&k) {
            // Gallop upward until k+step overshoots, then bisect.
            let mut step = T::one();
            let mut lo = k.clone();
            let mut hi;
            loop {
                let probe = lo.clone() + step.clone();
                if not_above(&probe) {
                    lo = probe;
                    step = step.clone() + step;
                } else {
                    hi = probe;
                    break;
                }
            }
            while hi.clone() - lo.clone() > T::one() {
                let mid = lo.clone() + (hi.clone() - lo.clone()) / (T::one() + T::one());
                if not_above(&mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            k = lo;
        } else {
            let mut step = T::one();
            let mut hi = k.clone();
            let mut lo;
            loop {
                let probe = hi.clone() - step.clone();
                if not_above(&probe) {
                    lo = probe;
                    break;
                } else {
                    hi = probe;
                    step = step.clone() + step;
                }
            }
            while hi.clone() - lo.clone() > T::one() {
                let mid = lo.clone() + (hi.clone() - lo.clone()) / (T::one() + T::one());
                if not_above(&mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            k = lo;
        }
        k
    }
}

/// Componentwise helpers for coordinate triples.
pub(crate) mod lin {
    use super::Coeff;

    pub fn add<T: Coeff>(x: &[T; 3], y: &[T; 3]) -> [T; 3] {
        [x[0].clone() + y[0].clone(), x[1].clone() + y[1].clone(), x[2].clone() + y[2].clone()]
    }

    pub fn sub<T: Coeff>(x: &[T; 3], y: &[T; 3]) -> [T; 3] {
        [x[0].clone() - y[0].clone(), x[1].clone() - y[1].clone(), x[2].clone() - y[2].clone()]
    }

    pub fn scale<T: Coeff>(x: &[T; 3], k: &T) -> [T; 3] {
        [x[0].clone() * k.clone(), x[1].clone() * k.clone(), x[2].clone() * k.clone()]
    }

    pub fn small<T: Coeff>(k: i64) -> T {
        T::from_i64(k).expect("small constant")
    }

    pub fn constant<T: Coeff>(k: T) -> [T; 3] {
        [k, T::zero(), T::zero()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn symbolic_zero() {
        assert_eq!(sign_radical_sum(&big(0), &[(big(0), 2)]).unwrap(), Ordering::Equal);
        assert_eq!(sign_radical_sum(&big(0), &[]).unwrap(), Ordering::Equal);
    }

    #[test]
    fn refinement_path_decides_tight_cases() {
        // 665857^2 - 2*470832^2 = 1, so 665857 - 470832*sqrt(2) ~ 1.06e-6 > 0,
        // and scaling by 10^12 pushes the ratio under the float filter.
        let p = big(665857) * big(10).pow(12);
        let q = big(-470832) * big(10).pow(12);
        assert_eq!(refine(&p, &[&(q.clone(), 2)]).unwrap(), Ordering::Greater);
        assert_eq!(refine(&-p, &[&(-q, 2)]).unwrap(), Ordering::Less);
    }

    #[test]
    fn precision_ceiling_is_reported() {
        // Pell solutions make |x - y*sqrt(2)| ~ 1/(2y). After 3400 steps y
        // has about 4320 bits, so the gap is invisible at 4096 bits.
        let (mut x, mut y) = (big(1), big(1));
        for _ in 0..3400 {
            let nx = &x + &y * 2;
            let ny = &x + &y;
            x = nx;
            y = ny;
        }
        let res = refine(&x, &[&(-y, 2)]);
        assert!(matches!(res, Err(QfError::InternalPrecisionExceeded { .. })));
    }

    #[test]
    fn floor_div_matches_known_values() {
        let b = Basis::new([2, 0]);
        // (10*sqrt(2) + 2) / 4 = 4.0355...
        assert_eq!(b.floor_div(&[2i128, 10, 0], &4), 4);
        // -sqrt(2) -> -2
        assert_eq!(b.floor_div(&[0i128, -1, 0], &1), -2);
        let bb: [BigInt; 3] = [big(0), big(-1), big(0)];
        assert_eq!(b.floor_div(&bb, &big(1)), big(-2));
    }

    #[test]
    fn floor_div_gallops_from_bad_estimates() {
        let b = Basis::new([2, 3]);
        // Huge value where the f64 estimate is far from exact.
        let c = [BigInt::from(1u8) << 200, big(7), big(-3)];
        let f = b.floor_div(&c, &big(1));
        let approx = 7.0 * 2f64.sqrt() - 3.0 * 3f64.sqrt();
        assert_eq!(f - (BigInt::from(1u8) << 200), big(approx.floor() as i64));
    }
}
