//! Integer-coordinate kernels shared by the sequence and partition code.
//!
//! A group of densities is brought onto one radicand basis with one common
//! denominator `D`, so that `alpha = A / D` with integer coordinates `A`.
//! Fractional states such as `{m*alpha + 1/2}` then live over `2D`, and every
//! comparison in the algorithms is the sign of an integer coordinate triple.
//! Small inputs run on `i128`; anything larger falls back to `BigInt`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::qfield::{lin, Basis, Coeff, QfError, QuadExpr};

/// Coordinates up to this magnitude use the `i128` kernel. With indices
/// below 2^64 every intermediate stays under 2^112.
const SMALL_LIMIT_BITS: u64 = 40;

/// A density `num / den` on a fixed basis.
#[derive(Clone, Debug)]
pub(crate) struct Line<T> {
    pub basis: Basis,
    pub den: T,
    pub num: [T; 3],
}

pub(crate) fn idx<T: Coeff>(m: u64) -> T {
    T::from_u64(m).expect("index fits kernel integer")
}

pub(crate) fn to_index<T: Coeff>(v: &T) -> u64 {
    v.to_u64().unwrap_or_else(|| panic!("index overflow: {v:?} does not fit in u64"))
}

impl<T: Coeff> Line<T> {
    pub fn two_den(&self) -> T {
        self.den.clone() + self.den.clone()
    }

    /// Numerator of `m*alpha + 1/2` over `2*den`.
    fn shifted(&self, m: &T) -> [T; 3] {
        let two_m = m.clone() + m.clone();
        let mut c = lin::scale(&self.num, &two_m);
        c[0] = c[0].clone() + self.den.clone();
        c
    }

    /// `(floor(m*alpha + 1/2), numerator of {m*alpha + 1/2} over 2*den)`.
    pub fn frac(&self, m: u64) -> (T, [T; 3]) {
        let mut c = self.shifted(&idx(m));
        let k = self.basis.floor_div(&c, &self.two_den());
        c[0] = c[0].clone() - k.clone() * self.two_den();
        (k, c)
    }

    /// Counting function of the Webster sequence: `floor(m*alpha + 1/2)`.
    pub fn count(&self, m: u64) -> u64 {
        if m == 0 {
            return 0;
        }
        to_index(&self.basis.floor_div(&self.shifted(&idx(m)), &self.two_den()))
    }

    /// `floor(m*alpha)`.
    pub fn floor_multiple(&self, m: u64) -> T {
        self.basis.floor_div(&lin::scale(&self.num, &idx(m)), &self.den)
    }

    pub fn sign(&self, c: &[T; 3]) -> Ordering {
        self.basis.sign(c)
    }

    /// Membership: `{m*alpha + 1/2} < alpha`.
    pub fn is_member(&self, m: u64) -> bool {
        let (_, u) = self.frac(m);
        let two = lin::small::<T>(2);
        strict_lt(self.sign(&lin::sub(&u, &lin::scale(&self.num, &two))))
    }

    /// `ceil((n - 1/2) / alpha)`: the least `m` with `2m*alpha >= 2n - 1`.
    pub fn term(&self, n: u64) -> u64 {
        assert!(n >= 1, "ranks start at 1");
        let target = idx::<T>(n) + idx::<T>(n) - T::one();
        // value(2m*num - (2n-1)*den) >= 0
        let reaches = |m: &T| {
            let two_m = m.clone() + m.clone();
            let mut c = lin::scale(&self.num, &two_m);
            c[0] = c[0].clone() - target.clone() * self.den.clone();
            self.sign(&c) != Ordering::Less
        };
        let alpha = self.basis.approx(&self.num) / self.den.approx();
        let est = ((n as f64 - 0.5) / alpha).ceil();
        let guess: T = if est.is_finite() && (1.0..1e18).contains(&est) {
            T::from_f64(est).unwrap_or_else(T::one)
        } else {
            T::one()
        };
        to_index(&least_true(guess, reaches))
    }
}

/// Least integer `m >= 1` with `pred(m)`, for monotone `pred`, searching
/// outward from `guess`.
pub(crate) fn least_true<T: Coeff>(guess: T, pred: impl Fn(&T) -> bool) -> T {
    let one = T::one();
    let two = one.clone() + one.clone();
    let (mut lo, mut hi); // pred(lo) false (or lo == 0), pred(hi) true
    if pred(&guess) {
        hi = guess;
        let mut step = one.clone();
        loop {
            let probe = hi.clone() - step.clone();
            if probe < one {
                lo = T::zero();
                break;
            }
            if pred(&probe) {
                hi = probe;
                step = step.clone() * two.clone();
            } else {
                lo = probe;
                break;
            }
        }
    } else {
        lo = guess;
        let mut step = one.clone();
        loop {
            let probe = lo.clone() + step.clone();
            if pred(&probe) {
                hi = probe;
                break;
            }
            lo = probe;
            step = step.clone() * two.clone();
        }
    }
    while hi.clone() - lo.clone() > one {
        let mid = lo.clone() + (hi.clone() - lo.clone()) / two.clone();
        if pred(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Strict comparison helper: equality signals an arithmetic fault, because
/// for irrational densities none of the compared quantities can coincide.
pub(crate) fn strict_lt(ord: Ordering) -> bool {
    match ord {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => panic!("degenerate comparison: exact tie between irrational quantities"),
    }
}

/// Common frame of a list of expressions: `(basis, den, numerators)`.
pub(crate) fn common_frame(xs: &[&QuadExpr]) -> Result<(Basis, BigInt, Vec<[BigInt; 3]>), QfError> {
    let mut rads: Vec<u64> = xs.iter().flat_map(|x| x.radicands()).collect();
    rads.sort_unstable();
    rads.dedup();
    if rads.len() > 2 {
        return Err(QfError::RadicandOverflow(rads));
    }
    let mut slots = [0u64; 2];
    for (i, d) in rads.iter().enumerate() {
        slots[i] = *d;
    }
    let mut den = BigInt::one();
    for x in xs {
        den = den.lcm(x.rational_part().denom());
        for (q, _) in x.terms() {
            den = den.lcm(q.denom());
        }
    }
    let nums = xs
        .iter()
        .map(|x| {
            let mut c = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
            c[0] = (x.rational_part() * &den).to_integer();
            for (q, d) in x.terms() {
                let i = 1 + rads.iter().position(|r| r == d).expect("radicand in basis");
                c[i] = (q * &den).to_integer();
            }
            c
        })
        .collect();
    Ok((Basis::new(slots), den, nums))
}

pub(crate) fn fits_small(den: &BigInt, nums: &[[BigInt; 3]]) -> bool {
    let ok = |v: &BigInt| v.abs().bits() <= SMALL_LIMIT_BITS;
    ok(den) && nums.iter().all(|c| c.iter().all(ok))
}

pub(crate) fn narrow(c: &[BigInt; 3]) -> [i128; 3] {
    c.clone().map(|v| v.to_i128().expect("checked by fits_small"))
}

/// A single-density kernel on the density's own basis.
#[derive(Clone, Debug)]
pub(crate) enum AnyLine {
    Small(Line<i128>),
    Big(Line<BigInt>),
}

impl AnyLine {
    pub fn new(x: &QuadExpr) -> Result<Self, QfError> {
        let (basis, den, nums) = common_frame(&[x])?;
        Ok(if fits_small(&den, &nums) {
            AnyLine::Small(Line { basis, den: den.to_i128().expect("small"), num: narrow(&nums[0]) })
        } else {
            AnyLine::Big(Line { basis, den, num: nums[0].clone() })
        })
    }
}

macro_rules! with_line {
    ($line:expr, $l:ident => $body:expr) => {
        match $line {
            $crate::kernel::AnyLine::Small($l) => $body,
            $crate::kernel::AnyLine::Big($l) => $body,
        }
    };
}
pub(crate) use with_line;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::ratio;

    #[test]
    fn frame_merges_radicands_and_denominators() {
        let a = QuadExpr::term(ratio(1, 4), 2).unwrap();
        let b = QuadExpr::term(ratio(1, 8), 3).unwrap();
        let (basis, den, nums) = common_frame(&[&a, &b]).unwrap();
        assert_eq!(basis.radicands(), [2, 3]);
        assert_eq!(den, BigInt::from(8));
        assert_eq!(nums[0], [0, 2, 0].map(BigInt::from));
        assert_eq!(nums[1], [0, 0, 1].map(BigInt::from));
    }

    #[test]
    fn small_and_big_kernels_agree() {
        let a = QuadExpr::term(ratio(1, 4), 2).unwrap();
        let (basis, den, nums) = common_frame(&[&a]).unwrap();
        let big = Line { basis, den: den.clone(), num: nums[0].clone() };
        let small = Line { basis, den: den.to_i128().unwrap(), num: narrow(&nums[0]) };
        for m in 1..500u64 {
            assert_eq!(big.count(m), small.count(m));
            assert_eq!(big.term(m), small.term(m));
            assert_eq!(big.is_member(m), small.is_member(m));
        }
    }

    #[test]
    fn least_true_finds_boundary_from_either_side() {
        let pred = |m: &i128| *m >= 37;
        assert_eq!(least_true(1i128, pred), 37);
        assert_eq!(least_true(1000i128, pred), 37);
        assert_eq!(least_true(37i128, pred), 37);
        assert_eq!(least_true(5i128, |_: &i128| true), 1);
    }
}
