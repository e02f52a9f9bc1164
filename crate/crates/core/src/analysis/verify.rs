//! Exact verification sweeps: partition, agreement of the two algorithms,
//! quota, perturbation bounds, sandwich bounds and the error tables.

use std::fmt;
use std::str::FromStr;

use super::sweep::{sweep, Evaluation, Step};
use crate::kernel::{idx, strict_lt, Line};
use crate::partition::frame::{with_frame, Frame};
use crate::partition::{DensityTriple, Label};
use crate::qfield::{lin, Coeff};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    /// Exactly one of the three membership conditions holds for each index.
    Partition,
    /// The term streams agree with the label sweep.
    Equivalence,
    /// All three counting functions stay within one of their fair share.
    Quota,
    /// Perturbed terms differ from the Webster terms by at most one.
    Perturbation,
    /// `c(n-1) <= c_tilde(n) <= c(n+1)`.
    Sandwich,
    /// Error values lie in {-1, 0, 1} and the case tables agree with the
    /// definitions as differences.
    Errors,
}

impl Check {
    pub const ALL: [Check; 6] =
        [Check::Partition, Check::Equivalence, Check::Quota, Check::Perturbation, Check::Sandwich, Check::Errors];

    pub fn name(self) -> &'static str {
        match self {
            Check::Partition => "partition",
            Check::Equivalence => "equivalence",
            Check::Quota => "quota",
            Check::Perturbation => "perturbation",
            Check::Sandwich => "sandwich",
            Check::Errors => "errors",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL.into_iter().find(|c| c.name() == s.trim()).ok_or_else(|| format!("unknown check {s:?}"))
    }
}

/// Test hooks for exercising failure paths.
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Report `b_tilde(r) + 1` instead of `b_tilde(r)` at this rank.
    pub corrupt_b_tilde_at: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    /// Number of indices or ranks examined.
    pub examined: u64,
    /// First counterexample index or rank, with a description.
    pub witness: Option<(u64, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotaViolation {
    pub sequence: Label,
    pub n: u64,
    pub count: u64,
    pub floor: u64,
    pub ceil: u64,
}

/// Quota audit of the three parts up to `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotaReport {
    pub n: u64,
    /// The first violations found, at most [`QuotaReport::KEPT`].
    pub violations: Vec<QuotaViolation>,
    pub violation_count: u64,
}

impl QuotaReport {
    pub const KEPT: usize = 64;

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Runs the selected checks over `1..=N`, fully exact.
pub fn verify(t: &DensityTriple, big_n: u64, checks: &[Check], opts: &VerifyOptions) -> Vec<CheckOutcome> {
    checks.iter().map(|&c| run_check(t, big_n, c, opts)).collect()
}

pub fn run_check(t: &DensityTriple, big_n: u64, check: Check, opts: &VerifyOptions) -> CheckOutcome {
    with_frame!(&t.frame, f => match check {
        Check::Partition => partition_check(f, big_n),
        Check::Equivalence => equivalence_check(f, big_n, opts),
        Check::Quota => {
            let q = quota_in(f, big_n);
            CheckOutcome {
                check,
                passed: q.passed(),
                examined: big_n,
                witness: q.violations.first().map(|v| {
                    (v.n, format!("{} count {} outside [{}, {}]", v.sequence, v.count, v.floor, v.ceil))
                }),
            }
        }
        Check::Perturbation => perturbation_check(f, big_n, opts),
        Check::Sandwich => sandwich_check(f, big_n),
        Check::Errors => errors_check(f, big_n),
    })
}

/// Every count of the three parts lies in `{floor(n*d), ceil(n*d)}` for
/// `n <= N`.
pub fn verify_quota(t: &DensityTriple, big_n: u64) -> QuotaReport {
    with_frame!(&t.frame, f => quota_in(f, big_n))
}

/// Running state shared by the rank-tracking sweeps.
struct Acc {
    /// ranks so far in the A, B, C parts
    ra: u64,
    rb: u64,
    rc: u64,
    examined: u64,
    first: Option<(u64, String)>,
}

impl Acc {
    fn at<T: Coeff>(f: &Frame<T>, lo: u64) -> Self {
        Acc {
            ra: f.la.count(lo - 1),
            rb: f.wbeta_tilde_count(lo - 1),
            rc: f.wgamma_tilde_count(lo - 1),
            examined: 0,
            first: None,
        }
    }

    fn fail(&mut self, n: u64, msg: String) {
        if self.first.is_none() {
            self.first = Some((n, msg));
        }
    }

    /// Advances the rank of the label at this step and returns it.
    fn advance(&mut self, label: Label) -> u64 {
        let r = match label {
            Label::A => &mut self.ra,
            Label::B => &mut self.rb,
            Label::C => &mut self.rc,
        };
        *r += 1;
        *r
    }

    fn merge(l: Acc, r: Acc) -> Acc {
        Acc { examined: l.examined + r.examined, first: l.first.or(r.first), ..r }
    }

    fn outcome(self, check: Check) -> CheckOutcome {
        CheckOutcome { check, passed: self.first.is_none(), examined: self.examined, witness: self.first }
    }
}

fn b_tilde_hooked<T: Coeff>(f: &Frame<T>, r: u64, opts: &VerifyOptions) -> Option<u64> {
    let b = f.b_tilde(r)?;
    Some(if opts.corrupt_b_tilde_at == Some(r) { b + 1 } else { b })
}

fn c_tilde_unique<T: Coeff>(f: &Frame<T>, r: u64) -> Option<u64> {
    match f.c_tilde_candidates(r).as_slice() {
        [m] => Some(*m),
        _ => None,
    }
}

fn partition_check<T: Coeff>(f: &Frame<T>, big_n: u64) -> CheckOutcome {
    let acc = sweep(
        f,
        1,
        big_n,
        Evaluation::Incremental,
        |lo| Acc::at(f, lo),
        |acc, s: &Step| {
            acc.examined += 1;
            let r = &s.region;
            let is_a = r.u_lt_a;
            let is_b = (!r.u_lt_a && r.v_lt_b)
                || (r.u_gt_1ma && r.v_gt_1mhb)
                || (!r.u_lt_a && r.u_lt_2a && !r.v_lt_b && r.v_lt_3hb);
            let is_c = r.in_w_gamma_tilde();
            let hits = u8::from(is_a) + u8::from(is_b) + u8::from(is_c);
            if hits != 1 {
                acc.fail(s.m, format!("{hits} parts claim this index (A={is_a}, B={is_b}, C={is_c})"));
            }
        },
        Acc::merge,
    );
    acc.outcome(Check::Partition)
}

fn equivalence_check<T: Coeff>(f: &Frame<T>, big_n: u64, opts: &VerifyOptions) -> CheckOutcome {
    let acc = sweep(
        f,
        1,
        big_n,
        Evaluation::Incremental,
        |lo| Acc::at(f, lo),
        |acc, s: &Step| {
            acc.examined += 1;
            if acc.first.is_some() {
                return;
            }
            let label = s.region.label();
            let r = acc.advance(label);
            let term = match label {
                Label::A => Some(f.la.term(r)),
                Label::B => b_tilde_hooked(f, r, opts),
                Label::C => c_tilde_unique(f, r),
            };
            if term != Some(s.m) {
                acc.fail(s.m, format!("label {label} with rank {r}, but term stream gives {term:?}"));
            }
        },
        Acc::merge,
    );
    let mut out = acc.outcome(Check::Equivalence);
    if out.passed {
        // No term stream may produce a further element within range.
        let (ra, rb, rc) = (f.la.count(big_n), f.wbeta_tilde_count(big_n), f.wgamma_tilde_count(big_n));
        let next =
            [("A", Some(f.la.term(ra + 1))), ("B", b_tilde_hooked(f, rb + 1, opts)), ("C", c_tilde_unique(f, rc + 1))];
        for (name, t) in next {
            if !matches!(t, Some(v) if v > big_n) {
                out.passed = false;
                out.witness = Some((big_n, format!("{name} stream has an extra term {t:?} within range")));
                break;
            }
        }
    }
    out
}

/// Whether `|count - n*num/den| < 1`.
fn within_one<T: Coeff>(l: &Line<T>, n: u64, count: u64) -> bool {
    let mut c = lin::scale(&l.num, &(-idx::<T>(n)));
    c[0] = c[0].clone() + idx::<T>(count) * l.den.clone();
    let mut above = c.clone();
    above[0] = above[0].clone() - l.den.clone();
    let mut below = c;
    below[0] = below[0].clone() + l.den.clone();
    strict_lt(l.sign(&above)) && !strict_lt(l.sign(&below))
}

fn quota_in<T: Coeff>(f: &Frame<T>, big_n: u64) -> QuotaReport {
    struct Q {
        counts: [u64; 3],
        violations: Vec<QuotaViolation>,
        total: u64,
    }
    let lines = [&f.la, &f.lb, &f.lg];
    let q = sweep(
        f,
        1,
        big_n,
        Evaluation::Incremental,
        |lo| Q {
            counts: [f.la.count(lo - 1), f.wbeta_tilde_count(lo - 1), f.wgamma_tilde_count(lo - 1)],
            violations: Vec::new(),
            total: 0,
        },
        |q, s: &Step| {
            let label = s.region.label();
            q.counts[label as usize] += 1;
            for (i, seq) in [Label::A, Label::B, Label::C].into_iter().enumerate() {
                if !within_one(lines[i], s.m, q.counts[i]) {
                    q.total += 1;
                    if q.violations.len() < QuotaReport::KEPT {
                        let fl = lines[i].floor_multiple(s.m).to_u64().expect("fits");
                        q.violations.push(QuotaViolation {
                            sequence: seq,
                            n: s.m,
                            count: q.counts[i],
                            floor: fl,
                            ceil: fl + 1,
                        });
                    }
                }
            }
        },
        |mut l, r| {
            l.total += r.total;
            l.violations.extend(r.violations);
            l.violations.truncate(QuotaReport::KEPT);
            Q { counts: r.counts, violations: l.violations, total: l.total }
        },
    );
    QuotaReport { n: big_n, violations: q.violations, violation_count: q.total }
}

fn perturbation_check<T: Coeff>(f: &Frame<T>, big_n: u64, opts: &VerifyOptions) -> CheckOutcome {
    let acc = sweep(
        f,
        1,
        big_n,
        Evaluation::Incremental,
        |lo| Acc::at(f, lo),
        |acc, s: &Step| {
            let label = s.region.label();
            let r = acc.advance(label);
            acc.examined += 1;
            if acc.first.is_some() {
                return;
            }
            let (webster, algorithmic) = match label {
                Label::A => (f.la.term(r), Some(f.la.term(r))),
                Label::B => (f.lb.term(r), b_tilde_hooked(f, r, opts)),
                Label::C => (f.lg.term(r), c_tilde_unique(f, r)),
            };
            if label == Label::A && webster != s.m {
                acc.fail(r, format!("A part differs from the Webster sequence: {} vs {webster}", s.m));
                return;
            }
            for (what, v) in [("swept", Some(s.m)), ("computed", algorithmic)] {
                match v {
                    Some(v) if v.abs_diff(webster) <= 1 => {}
                    _ => {
                        acc.fail(r, format!("{label} rank {r}: {what} term {v:?} vs Webster term {webster}"));
                        return;
                    }
                }
            }
        },
        Acc::merge,
    );
    acc.outcome(Check::Perturbation)
}

fn sandwich_check<T: Coeff>(f: &Frame<T>, big_n: u64) -> CheckOutcome {
    let acc = sweep(
        f,
        1,
        big_n,
        Evaluation::Incremental,
        |lo| Acc::at(f, lo),
        |acc, s: &Step| {
            if s.region.label() != Label::C {
                return;
            }
            let r = acc.advance(Label::C);
            acc.examined += 1;
            let lower = if r >= 2 { f.lg.term(r - 1) } else { 0 };
            let upper = f.lg.term(r + 1);
            if !(lower <= s.m && s.m <= upper) {
                acc.fail(r, format!("c_tilde = {} outside [{lower}, {upper}]", s.m));
            }
        },
        Acc::merge,
    );
    acc.outcome(Check::Sandwich)
}

fn errors_check<T: Coeff>(f: &Frame<T>, big_n: u64) -> CheckOutcome {
    let acc = sweep(
        f,
        1,
        big_n,
        Evaluation::Incremental,
        |lo| Acc::at(f, lo),
        |acc, s: &Step| {
            acc.examined += 1;
            if acc.first.is_some() {
                return;
            }
            let reg = &s.region;
            let label = reg.label();
            let r = acc.advance(label);
            let m = s.m as i64;
            let count_g = f.lg.count(s.m) as i64;
            // counting errors as differences of counting functions
            let e_beta_def = acc.rb as i64 - s.count_b as i64;
            let e_gamma_def = acc.rc as i64 - count_g;
            let (eb, eg) = (i64::from(reg.e_beta()), i64::from(reg.e_gamma()));
            if eb != e_beta_def || eg != e_gamma_def {
                acc.fail(s.m, format!("E tables ({eb}, {eg}) vs differences ({e_beta_def}, {e_gamma_def})"));
                return;
            }
            let identity = i64::from(reg.delta_uv()) - i64::from(reg.delta_shifted()) - eb;
            if eg != identity {
                acc.fail(s.m, format!("E_gamma {eg} vs delta identity {identity}"));
                return;
            }
            let sum = s.count_a as i64 + s.count_b as i64 + count_g;
            let expected = m - i64::from(reg.delta_uv()) + i64::from(reg.delta_shifted());
            if sum != expected {
                acc.fail(s.m, format!("counting-sum identity: {sum} vs {expected}"));
                return;
            }
            if eg == -1 && !reg.in_w_gamma() {
                acc.fail(s.m, "E_gamma = -1 outside W_gamma".into());
                return;
            }
            if eg == 1 && label != Label::C {
                acc.fail(s.m, "E_gamma = +1 on a non-C index".into());
                return;
            }
            // perturbations at the rank this index holds
            match label {
                Label::B => {
                    let b = f.lb.term(r);
                    let def = b as i64 - s.m as i64;
                    let table = f.region(b).b_table().map(i64::from);
                    if table != Some(def) || def.abs() > 1 {
                        acc.fail(s.m, format!("b perturbation at rank {r}: table {table:?} vs {def}"));
                    }
                }
                Label::C => {
                    let def = f.lg.term(r) as i64 - s.m as i64;
                    let table = reg.c_table().map(i64::from);
                    if table != Some(def) || def.abs() > 1 {
                        acc.fail(s.m, format!("c perturbation at rank {r}: table {table:?} vs {def}"));
                    }
                }
                Label::A => {}
            }
        },
        Acc::merge,
    );
    acc.outcome(Check::Errors)
}
