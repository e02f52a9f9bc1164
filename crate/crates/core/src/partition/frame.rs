//! The three densities on one integer frame, and the predicates every
//! decision of the partition algorithms is built from.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::kernel::{common_frame, fits_small, narrow, strict_lt, Line};
use crate::qfield::{lin, Basis, Coeff, QfError, QuadExpr};
use crate::webster::Cursor;

/// Position of `(u, v)` = `({m*alpha + 1/2}, {m*beta + 1/2})` relative to
/// every threshold the algorithms compare against. `s = u + v` and `w` is
/// `{m*gamma + 1/2} = 1 - {s - 1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Region {
    pub u_lt_a: bool,
    pub u_gt_1ma: bool,
    pub u_lt_2a: bool,
    pub v_lt_b: bool,
    pub v_lt_hb: bool,
    pub v_gt_1mhb: bool,
    pub v_lt_3hb: bool,
    pub s_lt_half: bool,
    pub s_lt_1: bool,
    pub s_lt_3half: bool,
    /// `s < 3/2 - gamma`
    pub s_lt_3half_mg: bool,
    pub w_lt_g: bool,
}

impl Region {
    /// Which disjunct of the assignment rule fires; `0` is the A rule, `1..=3`
    /// the B rules, `4` the C default.
    pub fn rule_index(&self) -> u8 {
        if self.u_lt_a {
            0
        } else if self.v_lt_b {
            1
        } else if self.u_gt_1ma && self.v_gt_1mhb {
            2
        } else if self.u_lt_2a && !self.v_lt_b && self.v_lt_3hb {
            3
        } else {
            4
        }
    }

    pub fn in_w_alpha(&self) -> bool {
        self.u_lt_a
    }

    pub fn in_w_beta(&self) -> bool {
        self.v_lt_b
    }

    pub fn in_w_gamma(&self) -> bool {
        self.w_lt_g
    }

    /// Membership in the complement of `W_alpha` and the perturbed `W_beta`,
    /// written out as four independent clauses rather than through the
    /// assignment rule.
    pub fn in_w_gamma_tilde(&self) -> bool {
        !self.u_lt_a && !self.v_lt_b && (!self.u_gt_1ma || !self.v_gt_1mhb) && (!self.u_lt_2a || !self.v_lt_3hb)
    }

    pub fn e_beta(&self) -> i8 {
        if self.u_gt_1ma && self.v_gt_1mhb {
            1
        } else if self.u_lt_a && self.v_lt_hb {
            -1
        } else {
            0
        }
    }

    pub fn e_gamma(&self) -> i8 {
        // s < 2 always holds since u, v < 1
        if !self.s_lt_3half && (!self.u_gt_1ma || !self.v_gt_1mhb) {
            1
        } else if self.s_lt_half && (!self.u_lt_a || !self.v_lt_hb) {
            -1
        } else {
            0
        }
    }

    /// `delta(u, v)`: whether `u + v >= 1`.
    pub fn delta_uv(&self) -> i8 {
        i8::from(!self.s_lt_1)
    }

    /// `delta({u + v - 1/2}, 1/2)`.
    pub fn delta_shifted(&self) -> i8 {
        i8::from(self.s_lt_half || (!self.s_lt_1 && self.s_lt_3half))
    }

    /// `b(n) - b_tilde(n)` read off the table at `m = b(n)`; `None` if no row
    /// applies, which cannot happen for `m` in `W_beta`.
    pub fn b_table(&self) -> Option<i8> {
        if self.u_lt_a && self.v_lt_hb {
            Some(-1)
        } else if !self.u_lt_a && self.v_lt_b {
            Some(0)
        } else if self.u_lt_a && !self.v_lt_hb && self.v_lt_b {
            Some(1)
        } else {
            None
        }
    }

    /// `c(n) - c_tilde(n)` read off the table at `m = c_tilde(n)`.
    pub fn c_table(&self) -> Option<i8> {
        let base = !self.u_lt_a && !self.v_lt_b;
        if base && (!self.u_lt_2a || !self.v_lt_3hb) && self.s_lt_3half_mg {
            Some(-1)
        } else if base && !self.s_lt_3half_mg && self.s_lt_3half {
            Some(0)
        } else if !self.s_lt_3half && (!self.u_gt_1ma || !self.v_gt_1mhb) {
            Some(1)
        } else {
            None
        }
    }
}

/// `alpha = a / den`, `beta = b / den`, `gamma = g / den` on a shared basis.
/// Fractional numerators are over `2*den`.
#[derive(Clone, Debug)]
pub(crate) struct Frame<T> {
    pub basis: Basis,
    pub la: Line<T>,
    pub lb: Line<T>,
    pub lg: Line<T>,
    two_a: [T; 3],
    one_minus_a: [T; 3],
    four_a: [T; 3],
    two_b: [T; 3],
    b: [T; 3],
    one_minus_hb: [T; 3],
    three_b: [T; 3],
    half: [T; 3],
    one: [T; 3],
    three_half: [T; 3],
    three_half_mg: [T; 3],
    two_g: [T; 3],
}

fn sign_lt<T: Coeff>(basis: &Basis, x: &[T; 3], t: &[T; 3]) -> bool {
    strict_lt(basis.sign(&lin::sub(x, t)))
}

impl<T: Coeff> Frame<T> {
    pub fn new(basis: Basis, den: T, a: [T; 3], b: [T; 3]) -> Self {
        let two = lin::small::<T>(2);
        let three = lin::small::<T>(3);
        let four = lin::small::<T>(4);
        let d = lin::constant(den.clone());
        let g = lin::sub(&lin::sub(&d, &a), &b);
        let two_d = lin::scale(&d, &two);
        let mk = |num: [T; 3]| Line { basis, den: den.clone(), num };
        Frame {
            basis,
            two_a: lin::scale(&a, &two),
            one_minus_a: lin::sub(&two_d, &lin::scale(&a, &two)),
            four_a: lin::scale(&a, &four),
            two_b: lin::scale(&b, &two),
            b: b.clone(),
            one_minus_hb: lin::sub(&two_d, &b),
            three_b: lin::scale(&b, &three),
            half: d.clone(),
            one: two_d.clone(),
            three_half: lin::scale(&d, &three),
            three_half_mg: lin::sub(&lin::scale(&d, &three), &lin::scale(&g, &two)),
            two_g: lin::scale(&g, &two),
            la: mk(a),
            lb: mk(b),
            lg: mk(g),
        }
    }

    /// Region of fractional numerators `u`, `v` (over `2*den`).
    pub fn region_of(&self, u: &[T; 3], v: &[T; 3]) -> Region {
        let bs = &self.basis;
        let s = lin::add(u, v);
        let s_lt_half = sign_lt(bs, &s, &self.half);
        let s_lt_1 = sign_lt(bs, &s, &self.one);
        let s_lt_3half = sign_lt(bs, &s, &self.three_half);
        // t = {s - 1/2} over 2*den, w = 1 - t
        let mut t = lin::sub(&s, &self.half);
        if s_lt_half {
            t = lin::add(&t, &self.one);
        } else if !s_lt_3half {
            t = lin::sub(&t, &self.one);
        }
        let w = lin::sub(&self.one, &t);
        Region {
            u_lt_a: sign_lt(bs, u, &self.two_a),
            u_gt_1ma: !sign_lt(bs, u, &self.one_minus_a),
            u_lt_2a: sign_lt(bs, u, &self.four_a),
            v_lt_b: sign_lt(bs, v, &self.two_b),
            v_lt_hb: sign_lt(bs, v, &self.b),
            v_gt_1mhb: !sign_lt(bs, v, &self.one_minus_hb),
            v_lt_3hb: sign_lt(bs, v, &self.three_b),
            s_lt_half,
            s_lt_1,
            s_lt_3half,
            s_lt_3half_mg: sign_lt(bs, &s, &self.three_half_mg),
            w_lt_g: sign_lt(bs, &w, &self.two_g),
        }
    }

    pub fn region(&self, m: u64) -> Region {
        let (_, u) = self.la.frac(m);
        let (_, v) = self.lb.frac(m);
        self.region_of(&u, &v)
    }

    pub fn wbeta_tilde_count(&self, m: u64) -> u64 {
        if m == 0 {
            return 0;
        }
        let e = self.region(m).e_beta();
        (self.lb.count(m) as i64 + i64::from(e)) as u64
    }

    pub fn wgamma_tilde_count(&self, m: u64) -> u64 {
        m - self.la.count(m) - self.wbeta_tilde_count(m)
    }

    /// `b_tilde(n)` from the shifted-index rule, or `None` if no case fires.
    pub fn b_tilde(&self, n: u64) -> Option<u64> {
        let m = self.lb.term(n);
        let r = self.region(m);
        if !r.u_lt_a && r.v_lt_b {
            Some(m)
        } else if r.u_lt_a && !r.v_lt_hb && r.v_lt_b {
            Some(m - 1)
        } else if r.u_lt_a && r.v_lt_hb {
            Some(m + 1)
        } else {
            None
        }
    }

    /// All candidates in `{c(n) - 1, c(n), c(n) + 1}` that are in the
    /// complement set with rank exactly `n`.
    pub fn c_tilde_candidates(&self, n: u64) -> Vec<u64> {
        let c = self.lg.term(n);
        (c.saturating_sub(1)..=c + 1)
            .filter(|&m| m >= 1)
            .filter(|&m| {
                self.region(m).in_w_gamma_tilde()
                    && self.wgamma_tilde_count(m) == n
                    && self.wgamma_tilde_count(m - 1) == n - 1
            })
            .collect()
    }
}

/// Incremental `(u, v)` state over consecutive indices.
#[derive(Clone, Debug)]
pub(crate) struct TripleCursor<T> {
    pub ca: Cursor<T>,
    pub cb: Cursor<T>,
}

impl<T: Coeff> TripleCursor<T> {
    pub fn new(f: &Frame<T>, m: u64) -> Self {
        TripleCursor { ca: Cursor::new(&f.la, m), cb: Cursor::new(&f.lb, m) }
    }

    pub fn m(&self) -> u64 {
        self.ca.m
    }

    pub fn region(&self, f: &Frame<T>) -> Region {
        f.region_of(&self.ca.frac, &self.cb.frac)
    }

    pub fn step(&mut self, f: &Frame<T>) {
        self.ca.step(&f.la);
        self.cb.step(&f.lb);
    }

    /// `W_alpha(m)`.
    pub fn count_a(&self) -> u64 {
        self.ca.count.to_u64().expect("count fits")
    }

    /// `W_beta(m)`.
    pub fn count_b(&self) -> u64 {
        self.cb.count.to_u64().expect("count fits")
    }
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub(crate) enum AnyFrame {
    Small(Frame<i128>),
    Big(Frame<BigInt>),
}

impl AnyFrame {
    pub fn new(alpha: &QuadExpr, beta: &QuadExpr) -> Result<Self, QfError> {
        let (basis, den, nums) = common_frame(&[alpha, beta])?;
        Ok(if fits_small(&den, &nums) {
            let den = den.to_i128().expect("small");
            AnyFrame::Small(Frame::new(basis, den, narrow(&nums[0]), narrow(&nums[1])))
        } else {
            AnyFrame::Big(Frame::new(basis, den, nums[0].clone(), nums[1].clone()))
        })
    }
}

macro_rules! with_frame {
    ($frame:expr, $f:ident => $body:expr) => {
        match $frame {
            $crate::partition::frame::AnyFrame::Small($f) => $body,
            $crate::partition::frame::AnyFrame::Big($f) => $body,
        }
    };
}
pub(crate) use with_frame;
