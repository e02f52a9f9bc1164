//! Searches for finite patterns: optimality witnesses and probes of triples
//! outside the supported ordering conditions.

use std::cmp::Ordering;

use super::AnalysisError;
use crate::partition::frame::{with_frame, AnyFrame, Frame, Region, TripleCursor};
use crate::partition::{DensityTriple, Label};
use crate::qfield::{Coeff, QuadExpr, Rational};
use crate::webster::Density;

/// Which membership pattern to look for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// `m` in `W_alpha` and `W_beta`, and `m + 1` in `W_alpha`; needs
    /// `alpha > 1/2`.
    CaseI,
    /// `m` in `W_alpha` and `W_beta`, `m + 1` in `W_gamma`, `m + 2` in
    /// `W_alpha`; needs `1/3 < alpha < 1/2` and `gamma < 1/2`.
    CaseII,
}

fn rational(a: i64, b: i64) -> QuadExpr {
    QuadExpr::rational(Rational::new(a.into(), b.into()))
}

/// Smallest `m <= M` showing that no partition with two exact Webster parts
/// can use these densities.
///
/// Valid triples always have `alpha < 1/2`, so `CaseI` is rejected here;
/// see [`find_adjacent_pair_witness`] for that pattern.
pub fn find_optimality_witness(t: &DensityTriple, kind: WitnessKind, big_m: u64) -> Result<Option<u64>, AnalysisError> {
    if !t.is_independent() {
        return Err(AnalysisError::HypothesisViolated("1, alpha, beta must be linearly independent".into()));
    }
    let (a, g) = (t.alpha().value(), t.gamma().value());
    if kind == WitnessKind::CaseI {
        return Err(AnalysisError::HypothesisViolated(
            "the adjacent-pair pattern needs alpha > 1/2, which no valid triple has".into(),
        ));
    }
    if a.cmp(&rational(1, 3)) != Ordering::Greater || g.cmp(&rational(1, 2)) != Ordering::Less {
        return Err(AnalysisError::HypothesisViolated("needs alpha > 1/3 and gamma < 1/2".into()));
    }
    Ok(with_frame!(&t.frame, f => scan(f, big_m + 2, 3, |w: &[Region]| {
        w[0].in_w_alpha() && w[0].in_w_beta() && w[1].in_w_gamma() && w[2].in_w_alpha()
    })))
}

/// Smallest `m <= M` with `m` in `W_alpha` and `W_beta` and `m + 1` in
/// `W_alpha`, for `alpha > 1/2`.
pub fn find_adjacent_pair_witness(alpha: &Density, beta: &Density, big_m: u64) -> Result<Option<u64>, AnalysisError> {
    if alpha.value().cmp(&rational(1, 2)) != Ordering::Greater {
        return Err(AnalysisError::HypothesisViolated("needs alpha > 1/2".into()));
    }
    let frame =
        AnyFrame::new(alpha.value(), beta.value()).map_err(|e| AnalysisError::HypothesisViolated(e.to_string()))?;
    // u < alpha, u > 1 - alpha, v < beta
    Ok(with_frame!(&frame, f => scan(f, big_m, 1, |w: &[Region]| {
        w[0].u_lt_a && w[0].u_gt_1ma && w[0].v_lt_b
    })))
}

/// First `m` such that the regions of `m .. m + width` match, with
/// `m + width - 1 <= last`.
fn scan<T: Coeff>(f: &Frame<T>, last: u64, width: usize, pat: impl Fn(&[Region]) -> bool) -> Option<u64> {
    if (last as usize) < width {
        return None;
    }
    let mut cur = TripleCursor::new(f, 1);
    let mut window: Vec<Region> = Vec::with_capacity(width);
    loop {
        window.push(cur.region(f));
        if window.len() > width {
            window.remove(0);
        }
        if window.len() == width && pat(&window) {
            return Some(cur.m() + 1 - width as u64);
        }
        if cur.m() >= last {
            return None;
        }
        cur.step(f);
    }
}

/// A rank where the C part of the term construction strays by two or more
/// from the Webster sequence `W_gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeWitness {
    pub rank: u64,
    pub c_tilde: u64,
    pub c: u64,
}

/// Runs the term construction on a triple that may violate `beta < 1/2` or
/// `alpha < gamma`: the B part is `{b_tilde(n)}`, the C part is whatever
/// `W_alpha` and the B part leave uncovered. Returns the first rank whose C
/// term is within `M` and differs from `c(n)` by at least two.
///
/// Reporting only: absence up to `M` says nothing either way.
pub fn probe_violated_hypotheses(t: &DensityTriple, big_m: u64) -> Option<ProbeWitness> {
    with_frame!(&t.frame, f => probe_in(f, big_m))
}

fn probe_in<T: Coeff>(f: &Frame<T>, big_m: u64) -> Option<ProbeWitness> {
    let len = big_m as usize + 1;
    let mut in_b = vec![false; len];
    let mut n = 1;
    loop {
        // b_tilde(n) >= b(n) - 1, and b is increasing
        if f.lb.term(n) > big_m + 1 {
            break;
        }
        if let Some(m) = f.b_tilde(n) {
            if (m as usize) < len {
                in_b[m as usize] = true;
            }
        }
        n += 1;
    }
    let mut rank = 0;
    let mut cur = TripleCursor::new(f, 1);
    loop {
        let m = cur.m();
        let r = cur.region(f);
        if !r.in_w_alpha() && !in_b[m as usize] {
            rank += 1;
            let c = f.lg.term(rank);
            if m.abs_diff(c) >= 2 {
                return Some(ProbeWitness { rank, c_tilde: m, c });
            }
        }
        if m >= big_m {
            return None;
        }
        cur.step(f);
    }
}

/// Labels of `1..=N` by the assignment rule, for cross-checks.
pub fn label_sweep(t: &DensityTriple, big_n: u64) -> Vec<Label> {
    with_frame!(&t.frame, f => {
        let mut out = Vec::with_capacity(big_n as usize);
        if big_n >= 1 {
            let mut cur = TripleCursor::new(f, 1);
            loop {
                out.push(cur.region(f).label());
                if cur.m() == big_n {
                    break;
                }
                cur.step(f);
            }
        }
        out
    })
}
