use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::exact::sign_radical_sum;
use super::{QfError, Rational};

/// Largest radicand accepted before square-free reduction.
const MAX_RADICAND: u64 = 1 << 32;

/// An exact real `p + q1*sqrt(d1) + q2*sqrt(d2)`.
///
/// Canonical form: every `d` is square-free and at least 2, radicands are
/// strictly increasing, no coefficient is zero, at most two terms. Because
/// `1, sqrt(d1), sqrt(d2)` are linearly independent over the rationals the
/// canonical form of a value is unique, so derived equality is value
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExpr {
    p: Rational,
    terms: Vec<(Rational, u64)>,
}

/// Splits `n` as `s^2 * f` with `f` square-free; returns `(s, f)`.
pub fn squarefree_part(mut n: u64) -> (u64, u64) {
    assert!(n > 0, "squarefree_part(0)");
    let mut s = 1u64;
    let mut f = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p * p) {
            n /= p * p;
            s *= p;
        }
        if n.is_multiple_of(p) {
            n /= p;
            f *= p;
        }
        p += 1;
    }
    (s, f * n)
}

impl QuadExpr {
    pub fn zero() -> Self {
        QuadExpr { p: Rational::zero(), terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rational(p: Rational) -> Self {
        QuadExpr { p, terms: Vec::new() }
    }

    pub fn integer(k: i64) -> Self {
        Self::rational(Rational::from_integer(BigInt::from(k)))
    }

    /// `q * sqrt(d)`, reduced.
    pub fn term(q: Rational, d: u64) -> Result<Self, QfError> {
        Self::new(Rational::zero(), vec![(q, d)])
    }

    pub fn sqrt(d: u64) -> Result<Self, QfError> {
        Self::term(Rational::one(), d)
    }

    /// Builds and canonicalizes `p + sum(q * sqrt(d))`.
    pub fn new(p: Rational, terms: Vec<(Rational, u64)>) -> Result<Self, QfError> {
        let (p, merged) = merge(p, terms)?;
        if merged.len() > 2 {
            return Err(QfError::RadicandOverflow(merged.keys().copied().collect()));
        }
        Ok(QuadExpr { p, terms: merged.into_iter().map(|(d, q)| (q, d)).collect() })
    }

    pub fn rational_part(&self) -> &Rational {
        &self.p
    }

    /// `(coefficient, radicand)` pairs in increasing radicand order.
    pub fn terms(&self) -> &[(Rational, u64)] {
        &self.terms
    }

    pub fn radicands(&self) -> Vec<u64> {
        self.terms.iter().map(|(_, d)| *d).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `sqrt(d)` (zero if absent).
    pub fn coefficient(&self, d: u64) -> Rational {
        self.terms.iter().find(|(_, r)| *r == d).map(|(q, _)| q.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn checked_add(&self, other: &QuadExpr) -> Result<QuadExpr, QfError> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(&self.p + &other.p, terms)
    }

    pub fn checked_sub(&self, other: &QuadExpr) -> Result<QuadExpr, QfError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &QuadExpr) -> Result<QuadExpr, QfError> {
        let mut p = &self.p * &other.p;
        let mut terms = Vec::new();
        for (q, d) in &other.terms {
            terms.push((&self.p * q, *d));
        }
        for (q, d) in &self.terms {
            terms.push((q * &other.p, *d));
            for (q2, d2) in &other.terms {
                let g = d.gcd(d2);
                // sqrt(d)*sqrt(d2) = g*sqrt(d*d2/g^2), and d*d2/g^2 is
                // square-free when d and d2 are.
                let coef = q * q2 * Rational::from_integer(BigInt::from(g));
                let rad = (d / g) * (d2 / g);
                if rad == 1 {
                    p += coef;
                } else {
                    terms.push((coef, rad));
                }
            }
        }
        Self::new(p, terms)
    }

    /// Division; the divisor may carry at most one radicand (otherwise the
    /// inverse leaves the span in general).
    pub fn checked_div(&self, other: &QuadExpr) -> Result<QuadExpr, QfError> {
        match other.terms.as_slice() {
            [] => {
                if other.p.is_zero() {
                    return Err(QfError::DivisionByZero);
                }
                Ok(self.scale(&other.p.recip()))
            }
            [(b, d)] => {
                // 1/(a + b sqrt d) = (a - b sqrt d) / (a^2 - b^2 d); the norm is
                // nonzero because sqrt d is irrational.
                let a = &other.p;
                let norm = a * a - b * b * Rational::from_integer(BigInt::from(*d));
                let conj = QuadExpr { p: a.clone(), terms: vec![(-b.clone(), *d)] };
                Ok(self.checked_mul(&conj)?.scale(&norm.recip()))
            }
            _ => Err(QfError::RadicandOverflow(other.radicands())),
        }
    }

    pub fn neg(&self) -> QuadExpr {
        QuadExpr { p: -self.p.clone(), terms: self.terms.iter().map(|(q, d)| (-q.clone(), *d)).collect() }
    }

    pub fn scale(&self, k: &Rational) -> QuadExpr {
        if k.is_zero() {
            return QuadExpr::zero();
        }
        QuadExpr { p: &self.p * k, terms: self.terms.iter().map(|(q, d)| (q * k, *d)).collect() }
    }

    pub fn add_rational(&self, k: &Rational) -> QuadExpr {
        QuadExpr { p: &self.p + k, terms: self.terms.clone() }
    }

    /// Integer form `(P, [(A_i, d_i)], L)` with `self = (P + sum A_i sqrt d_i) / L`.
    pub(crate) fn cleared(&self) -> (BigInt, Vec<(BigInt, u64)>, BigInt) {
        let mut l = self.p.denom().clone();
        for (q, _) in &self.terms {
            l = l.lcm(q.denom());
        }
        let scale = |r: &Rational| (r * Rational::from_integer(l.clone())).to_integer();
        let terms = self.terms.iter().map(|(q, d)| (scale(q), *d)).collect();
        (scale(&self.p), terms, l)
    }

    pub fn try_sign(&self) -> Result<Ordering, QfError> {
        let (p, terms, _) = self.cleared();
        sign_radical_sum(&p, &terms)
    }

    /// Exact sign; panics on `InternalPrecisionExceeded`.
    pub fn sign(&self) -> Ordering {
        self.try_sign().unwrap_or_else(|e| panic!("{e}"))
    }

    /// Exact comparison. Works for any pair of expressions, even when their
    /// difference would exceed two radicands.
    pub fn try_cmp(&self, other: &QuadExpr) -> Result<Ordering, QfError> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(q, d)| (-q.clone(), *d)));
        let (p, merged) = merge(&self.p - &other.p, terms)?;
        let diff = QuadExpr { p, terms: merged.into_iter().map(|(d, q)| (q, d)).collect() };
        diff.try_sign()
    }

    /// Greatest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        let (p, terms, l) = self.cleared();
        // value >= k  <=>  P - k*L + sum >= 0
        let at_least = |k: &BigInt| {
            let shifted = &p - k * &l;
            sign_radical_sum(&shifted, &terms).unwrap_or_else(|e| panic!("{e}")) != Ordering::Less
        };
        let est = self.to_f64();
        let guess =
            if est.is_finite() && est.abs() < 1e15 { BigInt::from(est.floor() as i64) } else { p.div_floor(&l) };
        let mut lo = &guess - 2;
        let mut hi = &guess + 3;
        let mut step = BigInt::from(4);
        while !at_least(&lo) {
            lo -= &step;
            step <<= 1;
        }
        step = BigInt::from(4);
        while at_least(&hi) {
            hi += &step;
            step <<= 1;
        }
        // invariant: value >= lo, value < hi
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) >> 1;
            if at_least(&mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    /// `self - floor(self)`, in `[0, 1)`.
    pub fn frac(&self) -> QuadExpr {
        let f = self.floor();
        self.add_rational(&-Rational::from_integer(f))
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = self.p.to_f64().unwrap_or(f64::NAN);
        for (q, d) in &self.terms {
            v += q.to_f64().unwrap_or(f64::NAN) * (*d as f64).sqrt();
        }
        v
    }
}

impl PartialOrd for QuadExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExpr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Reduces radicands to square-free form and merges like terms, with no cap
/// on the number of distinct radicands.
fn merge(mut p: Rational, terms: Vec<(Rational, u64)>) -> Result<(Rational, BTreeMap<u64, Rational>), QfError> {
    let mut merged: BTreeMap<u64, Rational> = BTreeMap::new();
    for (q, d) in terms {
        if d == 0 || d > MAX_RADICAND {
            return Err(QfError::InvalidRadicand(BigInt::from(d)));
        }
        if q.is_zero() {
            continue;
        }
        let (s, f) = squarefree_part(d);
        let q = q * Rational::from_integer(BigInt::from(s));
        if f == 1 {
            p += q;
        } else {
            let slot = merged.entry(f).or_insert_with(Rational::zero);
            *slot += q;
        }
    }
    merged.retain(|_, q| !q.is_zero());
    Ok((p, merged))
}
