//! Single Webster sequences `W_alpha = (ceil((n - 1/2) / alpha))`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::kernel::{self, common_frame, strict_lt, with_line, AnyLine, Line};
use crate::qfield::{lin, Coeff, QfError, QuadExpr, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WebsterError {
    #[error("density must lie strictly between 0 and 1, got {0}")]
    OutOfRange(String),
    #[error("density must be irrational, got {0}")]
    Rational(String),
    #[error("{m} is not a member of the sequence")]
    NotAMember { m: u64 },
    #[error(transparent)]
    Arithmetic(#[from] QfError),
}

/// An irrational density `0 < alpha < 1`.
#[derive(Clone, Debug)]
pub struct Density {
    value: QuadExpr,
    line: AnyLine,
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for Density {}

impl Density {
    pub fn new(value: QuadExpr) -> Result<Self, WebsterError> {
        if value.is_rational() {
            return Err(WebsterError::Rational(value.to_string()));
        }
        if value.try_sign()? != Ordering::Greater || value.try_cmp(&QuadExpr::one())? != Ordering::Less {
            return Err(WebsterError::OutOfRange(value.to_string()));
        }
        let line = AnyLine::new(&value)?;
        Ok(Density { value, line })
    }

    pub fn value(&self) -> &QuadExpr {
        &self.value
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// `1 - alpha`, the complementary density.
    pub fn complement(&self) -> Density {
        let value = QuadExpr::one().checked_sub(&self.value).expect("same radicands");
        Density::new(value).expect("complement of a density is a density")
    }

    /// `n`-th term, `ceil((n - 1/2) / alpha)`, for `n >= 1`.
    pub fn term(&self, n: u64) -> u64 {
        with_line!(&self.line, l => l.term(n))
    }

    /// Number of terms `<= m`: `floor(m*alpha + 1/2)`.
    pub fn count(&self, m: u64) -> u64 {
        with_line!(&self.line, l => l.count(m))
    }

    /// `{m*alpha + 1/2} < alpha`.
    pub fn is_member(&self, m: u64) -> bool {
        assert!(m >= 1, "membership is defined for positive integers");
        with_line!(&self.line, l => l.is_member(m))
    }

    /// Exact fractional part `{m*alpha + 1/2}`.
    pub fn shifted_frac(&self, m: u64) -> QuadExpr {
        let k = with_line!(&self.line, l => l.frac(m).0.to_big());
        self.value
            .scale(&Rational::from_integer(BigInt::from(m)))
            .add_rational(&(Rational::new(BigInt::one(), BigInt::from(2)) - Rational::from_integer(k)))
    }

    /// Successor of the member `m`. The gap is `floor(1/alpha)` or one more,
    /// decided by where `{m*alpha + 1/2}` sits relative to `{1/alpha}*alpha`.
    pub fn gap_next(&self, m: u64) -> Result<u64, WebsterError> {
        if m == 0 || !self.is_member(m) {
            return Err(WebsterError::NotAMember { m });
        }
        Ok(with_line!(&self.line, l => gap_next_in(l, m)))
    }

    /// `floor(1/alpha)`.
    pub fn inverse_floor(&self) -> u64 {
        with_line!(&self.line, l => inverse_floor_in(l))
    }
}

fn inverse_floor_in<T: Coeff>(l: &Line<T>) -> u64 {
    // least k with k*alpha > 1, minus one
    let first_above = kernel::least_true(T::one(), |k: &T| {
        let mut c = lin::scale(&l.num, k);
        c[0] = c[0].clone() - l.den.clone();
        !strict_lt(l.sign(&c))
    });
    kernel::to_index(&first_above) - 1
}

fn gap_next_in<T: Coeff>(l: &Line<T>, m: u64) -> u64 {
    let k = inverse_floor_in(l);
    let (_, u) = l.frac(m);
    // {1/alpha}*alpha = 1 - k*alpha; over 2*den: 2*den - 2k*num
    let mut thr = lin::scale(&l.num, &kernel::idx::<T>(2 * k));
    thr = lin::sub(&lin::constant(l.two_den()), &thr);
    if strict_lt(l.sign(&lin::sub(&u, &thr))) {
        m + k + 1
    } else {
        m + k
    }
}

/// `ceil((n - 1/2) / alpha)`.
pub fn webster_term(alpha: &Density, n: u64) -> u64 {
    alpha.term(n)
}

/// `floor(m*alpha + 1/2)`, the number of terms not exceeding `m`.
pub fn webster_count(alpha: &Density, m: u64) -> u64 {
    alpha.count(m)
}

pub fn is_member(alpha: &Density, m: u64) -> bool {
    alpha.is_member(m)
}

pub fn gap_next(alpha: &Density, m: u64) -> Result<u64, WebsterError> {
    alpha.gap_next(m)
}

/// Beatty term `floor((n + theta) / alpha)`.
///
/// Fails with `RadicandOverflow` when `alpha` and `theta` together use more
/// than two radicands.
pub fn beatty_term(alpha: &Density, theta: &QuadExpr, n: u64) -> Result<BigInt, WebsterError> {
    let x = theta.add_rational(&Rational::from_integer(BigInt::from(n)));
    let (basis, _, nums) = common_frame(&[&alpha.value, &x])?;
    let (a, x) = (&nums[0], &nums[1]);
    // m*alpha <= x  <=>  sign(m*a - x) <= 0
    let fits = |m: &BigInt| basis.sign(&lin::sub(&lin::scale(a, m), x)) != Ordering::Greater;
    let est = x_over(basis.approx(x), basis.approx(a));
    let mut m = est;
    let mut step = BigInt::one();
    if fits(&m) {
        while fits(&(&m + &step)) {
            m += &step;
            step <<= 1;
        }
        let mut hi = &m + &step;
        while &hi - &m > BigInt::one() {
            let mid: BigInt = (&m + &hi) >> 1;
            if fits(&mid) {
                m = mid;
            } else {
                hi = mid;
            }
        }
    } else {
        let mut hi = m.clone();
        m -= &step;
        while !fits(&m) {
            hi = m.clone();
            step <<= 1;
            m -= &step;
        }
        while &hi - &m > BigInt::one() {
            let mid: BigInt = (&m + &hi) >> 1;
            if fits(&mid) {
                m = mid;
            } else {
                hi = mid;
            }
        }
    }
    Ok(m)
}

fn x_over(x: f64, a: f64) -> BigInt {
    let q = (x / a).floor();
    if q.is_finite() && q.abs() < 1e15 {
        BigInt::from(q as i64)
    } else {
        BigInt::zero()
    }
}

/// Largest `|count(n) - n*alpha|` over `1 <= n <= N`, kept exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationStat {
    pub sup_abs: QuadExpr,
    pub at_n: u64,
}

/// Exact supremum of `|floor(n*alpha + 1/2) - n*alpha|` for `n <= N`; always
/// below `1/2` for irrational `alpha`.
pub fn deviation_sup(alpha: &Density, big_n: u64) -> DeviationStat {
    assert!(big_n >= 1, "N must be positive");
    let (at_n, k) = with_line!(&alpha.line, l => deviation_sup_in(l, big_n));
    let n = Rational::from_integer(BigInt::from(at_n));
    let diff = alpha.value.scale(&n).neg().add_rational(&Rational::from_integer(k));
    let sup_abs = if diff.sign() == Ordering::Less { diff.neg() } else { diff };
    DeviationStat { sup_abs, at_n }
}

/// Returns the maximizing `n` and its count.
fn deviation_sup_in<T: Coeff>(l: &Line<T>, big_n: u64) -> (u64, BigInt) {
    // |k - n*alpha| over den is |k*den - n*num|; track the largest magnitude.
    let abs_dev = |n: u64, k: &T| {
        let mut c = lin::scale(&l.num, &kernel::idx::<T>(n));
        c = lin::sub(&lin::constant(k.clone() * l.den.clone()), &c);
        if l.sign(&c) == Ordering::Less {
            c = lin::scale(&c, &(-T::one()));
        }
        c
    };
    let mut cursor = Cursor::new(l, 1);
    let mut best = (1u64, cursor.count.clone(), abs_dev(1, &cursor.count));
    for n in 2..=big_n {
        cursor.step(l);
        let d = abs_dev(n, &cursor.count);
        if l.sign(&lin::sub(&d, &best.2)) == Ordering::Greater {
            best = (n, cursor.count.clone(), d);
        }
    }
    (best.0, best.1.to_big())
}

/// Incremental state `(floor(m*alpha + 1/2), {m*alpha + 1/2})` stepping
/// `m -> m + 1` with one exact comparison.
#[derive(Clone, Debug)]
pub(crate) struct Cursor<T> {
    pub m: u64,
    pub count: T,
    /// numerator over `2*den`
    pub frac: [T; 3],
}

impl<T: Coeff> Cursor<T> {
    pub fn new(l: &Line<T>, m: u64) -> Self {
        let (count, frac) = l.frac(m);
        Cursor { m, count, frac }
    }

    pub fn step(&mut self, l: &Line<T>) {
        self.m += 1;
        self.frac = lin::add(&self.frac, &lin::add(&l.num, &l.num));
        let over = lin::sub(&self.frac, &lin::constant(l.two_den()));
        if l.sign(&over) != Ordering::Less {
            self.frac = over;
            self.count = self.count.clone() + T::one();
        }
    }
}

/// Whether every `n <= N` lies in exactly one of `W_alpha`, `W_{1-alpha}`.
pub fn two_part_partition_check(alpha: &Density, big_n: u64) -> bool {
    let beta = alpha.complement();
    with_line!(&alpha.line, la => {
        with_line!(&beta.line, lb => two_part_in(la, lb, big_n))
    })
}

fn two_part_in<T: Coeff, S: Coeff>(la: &Line<T>, lb: &Line<S>, big_n: u64) -> bool {
    let mut ca = Cursor::new(la, 1);
    let mut cb = Cursor::new(lb, 1);
    let mut prev = (T::zero(), S::zero());
    for _ in 1..=big_n {
        let in_a = ca.count != prev.0;
        let in_b = cb.count != prev.1;
        if in_a == in_b {
            return false;
        }
        prev = (ca.count.clone(), cb.count.clone());
        ca.step(la);
        cb.step(lb);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::ratio;

    fn d(q: (i64, i64), r: u64) -> Density {
        Density::new(QuadExpr::term(ratio(q.0, q.1), r).unwrap()).unwrap()
    }

    #[test]
    fn rejects_non_densities() {
        assert!(matches!(Density::new(QuadExpr::rational(ratio(1, 3))), Err(WebsterError::Rational(_))));
        assert!(matches!(Density::new(QuadExpr::sqrt(2).unwrap()), Err(WebsterError::OutOfRange(_))));
        let neg = QuadExpr::term(ratio(-1, 4), 2).unwrap();
        assert!(matches!(Density::new(neg), Err(WebsterError::OutOfRange(_))));
    }

    #[test]
    fn term_count_and_membership_examples() {
        let a = d((1, 4), 2);
        assert_eq!((1..=5).map(|n| a.term(n)).collect::<Vec<_>>(), [2, 5, 8, 10, 13]);
        assert_eq!(a.count(10), 4);
        assert_eq!(a.count(0), 0);
        assert_eq!(a.count(2), 1);
        assert!(a.is_member(2));
        assert!(!a.is_member(1));
        assert!(a.is_member(5));
    }

    #[test]
    fn gaps() {
        let a = d((1, 4), 2);
        assert_eq!(a.inverse_floor(), 2);
        assert_eq!(a.gap_next(2).unwrap(), 5);
        assert_eq!(a.gap_next(5).unwrap(), 8);
        assert_eq!(a.gap_next(1), Err(WebsterError::NotAMember { m: 1 }));
        let h = d((1, 2), 2);
        assert_eq!(h.gap_next(1).unwrap(), 3);
    }

    #[test]
    fn beatty_examples() {
        let h = d((1, 2), 2);
        assert_eq!(beatty_term(&h, &QuadExpr::zero(), 1).unwrap(), BigInt::from(1));
        assert_eq!(beatty_term(&h, h.value(), 1).unwrap(), BigInt::from(2));
        let a = d((1, 4), 2);
        let theta = a.value().add_rational(&ratio(-1, 2));
        assert_eq!(beatty_term(&a, &theta, 2).unwrap(), BigInt::from(5));
        let t = QuadExpr::new(ratio(0, 1), vec![(ratio(1, 1), 3), (ratio(1, 1), 5)]).unwrap();
        assert!(matches!(beatty_term(&a, &t, 1), Err(WebsterError::Arithmetic(QfError::RadicandOverflow(_)))));
    }

    #[test]
    fn deviation_examples() {
        let a = d((1, 4), 2);
        let s = deviation_sup(&a, 1);
        assert_eq!(s.sup_abs, a.value().clone());
        assert_eq!(s.at_n, 1);
        let h = d((1, 2), 2);
        let s = deviation_sup(&h, 100);
        let v = s.sup_abs.to_f64();
        assert!(v > 0.49 && v < 0.5, "{v}");
        assert!(s.sup_abs < QuadExpr::rational(ratio(1, 2)));
    }

    #[test]
    fn shifted_frac_matches_decimal() {
        let a = d((1, 4), 2);
        assert!((a.shifted_frac(1).to_f64() - 0.853553390593).abs() < 1e-9);
        assert!((a.shifted_frac(2).to_f64() - 0.207106781187).abs() < 1e-9);
    }

    #[test]
    fn two_part_small() {
        assert!(two_part_partition_check(&d((1, 2), 2), 1000));
        assert!(two_part_partition_check(&d((1, 8), 3), 1000));
    }
}
