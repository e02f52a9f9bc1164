use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use tripart::qfield::{ratio, sign_radical_sum, squarefree_part, QuadExpr, Rational};

/// `c * sqrt(d) * 2^k`, truncated toward zero with error below one.
fn scaled_root(c: &BigInt, d: u64, k: u32) -> BigInt {
    let mag = ((c * c * BigInt::from(d)) << (2 * k)).sqrt();
    if c.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Sign by fixed-point evaluation with `k` fractional bits, or `None` when
/// the estimate is too close to zero to decide.
fn sign_by_isqrt(c0: &BigInt, terms: &[(BigInt, u64)], k: u32) -> Option<Ordering> {
    let mut s = c0 << k;
    for (c, d) in terms {
        s += scaled_root(c, *d, k);
    }
    let slack = BigInt::from(terms.len() as u64 + 1);
    if s.abs() <= slack {
        None
    } else {
        Some(s.sign().into_ordering())
    }
}

trait IntoOrdering {
    fn into_ordering(self) -> Ordering;
}

impl IntoOrdering for num_bigint::Sign {
    fn into_ordering(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

fn rat() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=40).prop_map(|(p, q)| ratio(p, q))
}

/// `p + q1*sqrt(d1) + q2*sqrt(d2)` with `d1, d2` squarefree and distinct.
fn quad() -> impl Strategy<Value = QuadExpr> {
    (rat(), rat(), rat(), prop::sample::select(vec![2u64, 3, 5, 6, 7]), prop::sample::select(vec![10u64, 11, 13]))
        .prop_map(|(p, a, b, d1, d2)| QuadExpr::new(p, vec![(a, d1), (b, d2)]).unwrap())
}

fn quad_pair() -> impl Strategy<Value = (QuadExpr, QuadExpr)> {
    (rat(), rat(), rat(), rat(), rat(), rat()).prop_map(|(p, a, b, r, c, e)| {
        (QuadExpr::new(p, vec![(a, 2), (b, 3)]).unwrap(), QuadExpr::new(r, vec![(c, 2), (e, 3)]).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn sign_agrees_with_fixed_point(
        c0 in -2_000_000i64..2_000_000,
        c1 in -2_000i64..2_000,
        c2 in -2_000i64..2_000,
        d1 in prop::sample::select(vec![2u64, 3, 5, 7]),
        d2 in prop::sample::select(vec![11u64, 13, 17]),
    ) {
        let terms = [(BigInt::from(c1), d1), (BigInt::from(c2), d2)];
        let exact = sign_radical_sum(&BigInt::from(c0), &terms).unwrap();
        match sign_by_isqrt(&BigInt::from(c0), &terms, 256) {
            Some(s) => prop_assert_eq!(exact, s),
            None => prop_assert_eq!(exact, Ordering::Equal),
        }
    }

    #[test]
    fn near_cancellation_is_resolved(k in 0u32..40) {
        // x^2 - 2y^2 = 1 solutions make x - y*sqrt(2) tiny and positive
        let (mut x, mut y) = (BigInt::from(3), BigInt::from(2));
        for _ in 0..k {
            let nx = &x * 3 + &y * 4;
            y = &x * 2 + &y * 3;
            x = nx;
        }
        let s = sign_radical_sum(&x, &[(-y.clone(), 2)]).unwrap();
        prop_assert_eq!(s, Ordering::Greater);
        let s = sign_radical_sum(&-x, &[(y, 2)]).unwrap();
        prop_assert_eq!(s, Ordering::Less);
    }

    #[test]
    fn floor_brackets(x in quad()) {
        let f = x.floor();
        let lo = QuadExpr::rational(Rational::from_integer(f.clone()));
        let hi = QuadExpr::rational(Rational::from_integer(f + 1));
        prop_assert!(lo <= x && x < hi);
        prop_assert_eq!(x.ceil(), -x.neg().floor());
    }

    #[test]
    fn frac_is_shift_invariant(x in quad(), n in -1000i64..1000) {
        let shifted = x.add_rational(&Rational::from_integer(n.into()));
        prop_assert_eq!(shifted.frac(), x.frac());
        let f = x.frac();
        prop_assert!(f >= QuadExpr::zero() && f < QuadExpr::one());
    }

    #[test]
    fn display_parse_round_trip(x in quad()) {
        let text = x.to_string();
        let back: QuadExpr = text.parse().unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn canonical_form_ignores_spelling(a in rat(), k in 1u64..12) {
        // a*sqrt(k^2 * 2) and (a*k)*sqrt(2) are the same number
        let left = QuadExpr::term(a.clone(), k * k * 2).unwrap();
        let right = QuadExpr::term(a * Rational::from_integer(k.into()), 2).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn field_operations((x, y) in quad_pair(), k in rat()) {
        let sum = x.checked_add(&y).unwrap();
        prop_assert_eq!(sum.checked_sub(&y).unwrap(), x.clone());
        prop_assert_eq!(x.cmp(&y), x.checked_sub(&y).unwrap().sign());
        if !k.is_zero() {
            let r = QuadExpr::rational(k);
            prop_assert_eq!(x.checked_mul(&r).unwrap().checked_div(&r).unwrap(), x.clone());
        }
    }

    #[test]
    fn squarefree_decomposition(n in 1u64..1_000_000) {
        let (k, d) = squarefree_part(n);
        prop_assert_eq!(k * k * d, n);
        for p in 2..=((d as f64).sqrt() as u64 + 1) {
            prop_assert!(d % (p * p) != 0 || p * p > d);
        }
    }

    #[test]
    fn decimal_rendering_is_close(x in quad()) {
        let s = x.to_decimal(30);
        let v: f64 = s.parse().unwrap();
        let f = x.to_f64();
        prop_assert!((v - f).abs() <= 1e-12 * f.abs().max(1.0), "{} vs {}", s, f);
    }
}

#[test]
fn decimal_ties_round_to_even() {
    let q = |p: i64, r: i64| QuadExpr::rational(ratio(p, r));
    assert_eq!(q(125, 100).to_decimal(2), "1.2");
    assert_eq!(q(135, 100).to_decimal(2), "1.4");
    assert_eq!(q(-125, 100).to_decimal(2), "-1.2");
    assert_eq!(q(1, 3).to_decimal(5), "0.33333");
}

#[test]
fn parse_rejects_garbage() {
    for bad in ["", "sqrt(", "1/0", "sqrt(-2)", "2**3", "sqrt(2) sqrt(3)"] {
        assert!(bad.parse::<QuadExpr>().is_err(), "{bad:?} parsed");
    }
}
