//! Partition of the positive integers into one exact Webster sequence
//! `W_alpha` and two almost Webster sequences of densities `beta`, `gamma`.
//!
//! Two equivalent constructions are provided. The term view gives the `n`-th
//! element of each part directly (`a_tilde`, `b_tilde`, `c_tilde`); the
//! assignment view labels a single integer (`assign`). Both run in constant
//! time per query and use only exact comparisons.

pub(crate) mod frame;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::qfield::{QfError, QuadExpr, Rational};
use crate::webster::{Density, WebsterError};
use frame::{with_frame, AnyFrame, Region};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TripleError {
    #[error("{name} is not a valid density: {source}")]
    Density { name: &'static str, source: WebsterError },
    #[error("alpha + beta + gamma = 1 fails: the sum is {0}")]
    SumNotOne(String),
    #[error("beta < 1/2 fails: beta = {0}")]
    BetaNotBelowHalf(String),
    #[error("alpha < gamma fails: alpha = {alpha}, gamma = {gamma}")]
    AlphaNotBelowGamma { alpha: String, gamma: String },
    #[error(transparent)]
    Arithmetic(#[from] QfError),
}

impl TripleError {
    /// The violated condition, as printed in diagnostics.
    pub fn clause(&self) -> &'static str {
        match self {
            TripleError::Density { .. } => "0 < x < 1, x irrational",
            TripleError::SumNotOne(_) => "alpha + beta + gamma = 1",
            TripleError::BetaNotBelowHalf(_) => "beta < 1/2",
            TripleError::AlphaNotBelowGamma { .. } => "alpha < gamma",
            TripleError::Arithmetic(_) => "representable in Q(sqrt(d1), sqrt(d2))",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("internal invariant violated in {op} at n = {n}: {detail}")]
    InternalInvariantViolation { op: &'static str, n: u64, detail: String },
}

/// Three irrational densities with `alpha + beta + gamma = 1`,
/// `beta < 1/2` and `alpha < gamma`.
#[derive(Clone, Debug)]
pub struct DensityTriple {
    alpha: Density,
    beta: Density,
    gamma: Density,
    pub(crate) frame: AnyFrame,
}

fn density(name: &'static str, x: QuadExpr) -> Result<Density, TripleError> {
    Density::new(x).map_err(|source| TripleError::Density { name, source })
}

fn half() -> QuadExpr {
    QuadExpr::rational(Rational::new(BigInt::from(1), BigInt::from(2)))
}

impl DensityTriple {
    /// Validated triple with `gamma = 1 - alpha - beta`.
    pub fn new(alpha: QuadExpr, beta: QuadExpr) -> Result<Self, TripleError> {
        let t = Self::relaxed(alpha, beta)?;
        if t.beta.value().try_cmp(&half())? != Ordering::Less {
            return Err(TripleError::BetaNotBelowHalf(t.beta.value().to_string()));
        }
        if t.alpha.value().try_cmp(t.gamma.value())? != Ordering::Less {
            return Err(TripleError::AlphaNotBelowGamma {
                alpha: t.alpha.value().to_string(),
                gamma: t.gamma.value().to_string(),
            });
        }
        Ok(t)
    }

    /// Validated triple from three explicit values, which must sum to 1.
    pub fn from_parts(alpha: QuadExpr, beta: QuadExpr, gamma: QuadExpr) -> Result<Self, TripleError> {
        let sum = alpha.checked_add(&beta)?.checked_add(&gamma)?;
        if sum != QuadExpr::one() {
            return Err(TripleError::SumNotOne(sum.to_string()));
        }
        Self::new(alpha, beta)
    }

    /// Three irrational densities summing to 1, without the ordering
    /// conditions `beta < 1/2` and `alpha < gamma`. Only the probes in
    /// the analysis module accept such triples.
    pub fn relaxed(alpha: QuadExpr, beta: QuadExpr) -> Result<Self, TripleError> {
        let gamma = QuadExpr::one().checked_sub(&alpha)?.checked_sub(&beta)?;
        let frame = AnyFrame::new(&alpha, &beta)?;
        Ok(DensityTriple {
            alpha: density("alpha", alpha)?,
            beta: density("beta", beta)?,
            gamma: density("gamma", gamma)?,
            frame,
        })
    }

    /// Whether `beta < 1/2` and `alpha < gamma` hold.
    pub fn satisfies_ordering(&self) -> bool {
        self.beta.value() < &half() && self.alpha.value() < self.gamma.value()
    }

    pub fn alpha(&self) -> &Density {
        &self.alpha
    }

    pub fn beta(&self) -> &Density {
        &self.beta
    }

    pub fn gamma(&self) -> &Density {
        &self.gamma
    }

    /// Consequences of the defining conditions, each as `(statement, holds)`.
    pub fn derived_checks(&self) -> Vec<(&'static str, bool)> {
        let (a, b, g) = (self.alpha.value(), self.beta.value(), self.gamma.value());
        let h = half();
        let quarter = QuadExpr::rational(Rational::new(BigInt::from(1), BigInt::from(4)));
        let hb = b.scale(&Rational::new(BigInt::from(1), BigInt::from(2)));
        let a_hb = a.checked_add(&hb).expect("same radicands");
        let g_hb = g.checked_add(&hb).expect("same radicands");
        vec![
            ("alpha < 1/2", a < &h),
            ("gamma > 1/4", g > &quarter),
            ("alpha + beta/2 < 1/2", a_hb < h),
            ("gamma + beta/2 > 1/2", g_hb > h),
        ]
    }

    /// Whether `1, alpha, beta` are linearly independent over the rationals.
    ///
    /// Decided exactly: write the irrational parts of `alpha` and `beta` as
    /// vectors over the shared radicand basis; `1, alpha, beta` are
    /// independent exactly when those two vectors are.
    pub fn is_independent(&self) -> bool {
        let (a, b) = (self.alpha.value(), self.beta.value());
        let mut rads = a.radicands();
        rads.extend(b.radicands());
        rads.sort_unstable();
        rads.dedup();
        if rads.len() < 2 {
            return false;
        }
        let det = a.coefficient(rads[0]) * b.coefficient(rads[1]) - a.coefficient(rads[1]) * b.coefficient(rads[0]);
        det != Rational::from_integer(BigInt::from(0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    A,
    B,
    C,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::A => "A",
            Label::B => "B",
            Label::C => "C",
        })
    }
}

/// The clause of the assignment rule that decided a label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `u < alpha`
    A,
    /// `u > alpha` and `v < beta`
    BI,
    /// `u > 1 - alpha` and `v > 1 - beta/2`
    BII,
    /// `alpha < u < 2*alpha` and `beta < v < 3*beta/2`
    BIII,
    /// none of the above
    CDefault,
}

impl Rule {
    pub fn label(self) -> Label {
        match self {
            Rule::A => Label::A,
            Rule::BI | Rule::BII | Rule::BIII => Label::B,
            Rule::CDefault => Label::C,
        }
    }

    fn from_index(i: u8) -> Rule {
        match i {
            0 => Rule::A,
            1 => Rule::BI,
            2 => Rule::BII,
            3 => Rule::BIII,
            _ => Rule::CDefault,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::A => "A-rule",
            Rule::BI => "B-rule-I",
            Rule::BII => "B-rule-II",
            Rule::BIII => "B-rule-III",
            Rule::CDefault => "C-default",
        })
    }
}

impl Region {
    pub(crate) fn rule(&self) -> Rule {
        Rule::from_index(self.rule_index())
    }

    pub(crate) fn label(&self) -> Label {
        self.rule().label()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub n: u64,
    pub label: Label,
    pub rule: Rule,
}

/// Exact fractional parts `u = {n*alpha + 1/2}`, `v = {n*beta + 1/2}`,
/// `w = {n*gamma + 1/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalState {
    pub n: u64,
    pub u: QuadExpr,
    pub v: QuadExpr,
    pub w: QuadExpr,
}

/// All error quantities attached to one index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErrorRecord {
    pub n: u64,
    /// `W~_beta(n) - W_beta(n)`
    pub e_beta: i8,
    /// `W~_gamma(n) - W_gamma(n)`
    pub e_gamma: i8,
    /// `b(n) - b_tilde(n)`
    pub b_perturb: i8,
    /// `c(n) - c_tilde(n)`
    pub c_perturb: i8,
}

pub fn frac_state(t: &DensityTriple, n: u64) -> FractionalState {
    assert!(n >= 1, "indices start at 1");
    FractionalState { n, u: t.alpha.shifted_frac(n), v: t.beta.shifted_frac(n), w: t.gamma.shifted_frac(n) }
}

pub(crate) fn region(t: &DensityTriple, n: u64) -> Region {
    with_frame!(&t.frame, f => f.region(n))
}

/// Label of `n`: A iff `u < alpha`; B iff `u > alpha, v < beta` or
/// `u > 1 - alpha, v > 1 - beta/2` or `alpha < u < 2*alpha, beta < v < 3*beta/2`;
/// C otherwise.
pub fn assign(t: &DensityTriple, n: u64) -> Assignment {
    assert!(n >= 1, "indices start at 1");
    let rule = region(t, n).rule();
    Assignment { n, label: rule.label(), rule }
}

/// `n`-th element of the A part; equal to the Webster term `a(n)`.
pub fn a_tilde(t: &DensityTriple, n: u64) -> u64 {
    t.alpha.term(n)
}

/// `n`-th element of the B part: `m = b(n)` shifted by one when `u_m < alpha`.
pub fn b_tilde(t: &DensityTriple, n: u64) -> Result<u64, PartitionError> {
    assert!(n >= 1, "ranks start at 1");
    with_frame!(&t.frame, f => f.b_tilde(n)).ok_or_else(|| PartitionError::InternalInvariantViolation {
        op: "b_tilde",
        n,
        detail: "no case of the shift rule applies to m = b(n)".into(),
    })
}

/// `n`-th element of the C part, the complement of the A and B parts.
///
/// Found by testing the three candidates `c(n) - 1, c(n), c(n) + 1` for
/// membership and rank.
pub fn c_tilde(t: &DensityTriple, n: u64) -> Result<u64, PartitionError> {
    assert!(n >= 1, "ranks start at 1");
    let found = with_frame!(&t.frame, f => f.c_tilde_candidates(n));
    match found.as_slice() {
        [m] => Ok(*m),
        other => Err(PartitionError::InternalInvariantViolation {
            op: "c_tilde",
            n,
            detail: format!("expected exactly one candidate, found {other:?}"),
        }),
    }
}

pub fn e_beta(t: &DensityTriple, m: u64) -> i8 {
    region(t, m).e_beta()
}

pub fn e_gamma(t: &DensityTriple, m: u64) -> i8 {
    region(t, m).e_gamma()
}

/// `1` if `s + t >= 1`, else `0`.
pub fn delta_indicator(s: &QuadExpr, t: &QuadExpr) -> u8 {
    let sum = s.checked_add(t).expect("arguments share at most two radicands");
    u8::from(sum >= QuadExpr::one())
}

/// Number of B-labelled integers `<= m`: `W_beta(m) + E_beta(m)`.
pub fn wbeta_tilde_count(t: &DensityTriple, m: u64) -> u64 {
    with_frame!(&t.frame, f => f.wbeta_tilde_count(m))
}

/// Number of C-labelled integers `<= m`: `m - W_alpha(m) - W~_beta(m)`.
pub fn wgamma_tilde_count(t: &DensityTriple, m: u64) -> u64 {
    with_frame!(&t.frame, f => f.wgamma_tilde_count(m))
}

/// `b(n) - b_tilde(n)` from the case table at `m = b(n)`.
pub fn b_perturbation(t: &DensityTriple, n: u64) -> Result<i8, PartitionError> {
    let m = t.beta.term(n);
    region(t, m).b_table().ok_or_else(|| PartitionError::InternalInvariantViolation {
        op: "b_perturbation",
        n,
        detail: format!("no table row applies at m = {m}"),
    })
}

/// `c(n) - c_tilde(n)`, computed as a difference of the two terms.
pub fn c_perturbation(t: &DensityTriple, n: u64) -> Result<i8, PartitionError> {
    let diff = t.gamma.term(n) as i64 - c_tilde(t, n)? as i64;
    Ok(diff as i8)
}

/// `c(n) - c_tilde(n)` read from the case table at `m = c_tilde(n)`.
pub fn c_perturbation_table(t: &DensityTriple, n: u64) -> Result<i8, PartitionError> {
    let m = c_tilde(t, n)?;
    region(t, m).c_table().ok_or_else(|| PartitionError::InternalInvariantViolation {
        op: "c_perturbation_table",
        n,
        detail: format!("no table row applies at m = {m}"),
    })
}

pub fn error_record(t: &DensityTriple, n: u64) -> Result<ErrorRecord, PartitionError> {
    let r = region(t, n);
    Ok(ErrorRecord {
        n,
        e_beta: r.e_beta(),
        e_gamma: r.e_gamma(),
        b_perturb: b_perturbation(t, n)?,
        c_perturb: c_perturbation(t, n)?,
    })
}
