//! Partitions with two exact Webster parts, possible only when
//! `r*alpha + s*beta = 1` with `r = s (mod 2)`.

use num_bigint::BigInt;

use super::AnalysisError;
use crate::partition::frame::{with_frame, Frame, TripleCursor};
use crate::partition::DensityTriple;
use crate::qfield::{Coeff, QuadExpr, Rational};

/// Densities `alpha`, `beta` with `r*alpha + s*beta = 1`, `r = s (mod 2)`,
/// `r, s >= 2`, whose completion `gamma = 1 - alpha - beta` is a valid triple.
#[derive(Clone, Debug)]
pub struct SpecialPairConfig {
    pub r: u64,
    pub s: u64,
    triple: DensityTriple,
}

impl SpecialPairConfig {
    pub fn new(r: u64, s: u64, alpha: QuadExpr, beta: QuadExpr) -> Result<Self, AnalysisError> {
        let invalid = |m: String| Err(AnalysisError::ConfigInvalid(m));
        if r < 2 || s < 2 {
            return invalid(format!("r and s must be at least 2, got r = {r}, s = {s}"));
        }
        if r % 2 != s % 2 {
            return invalid(format!("r = {r} and s = {s} have different parity"));
        }
        let k = |v: u64| Rational::from_integer(BigInt::from(v));
        let sum = alpha
            .scale(&k(r))
            .checked_add(&beta.scale(&k(s)))
            .map_err(|e| AnalysisError::ConfigInvalid(e.to_string()))?;
        if sum != QuadExpr::one() {
            return invalid(format!(
                "r*alpha + s*beta = {sum}, not 1 (with 1, alpha, beta linearly independent no such relation exists)"
            ));
        }
        let triple = DensityTriple::new(alpha, beta).map_err(|e| AnalysisError::ConfigInvalid(e.to_string()))?;
        Ok(SpecialPairConfig { r, s, triple })
    }

    pub fn triple(&self) -> &DensityTriple {
        &self.triple
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialReport {
    pub n: u64,
    /// First `m <= N` lying in both `W_alpha` and `W_beta`.
    pub first_overlap: Option<u64>,
    /// Number of ranks of the complement with term `<= N`.
    pub ranks: u64,
    /// Largest `|c_tilde(n) - c(n)|` over those ranks.
    pub max_c_deviation: u64,
    /// First rank where that deviation exceeds one.
    pub first_bound_violation: Option<u64>,
}

impl SpecialReport {
    pub fn passed(&self) -> bool {
        self.first_overlap.is_none() && self.first_bound_violation.is_none()
    }
}

/// Builds the complement of `W_alpha` and `W_beta` up to `N` and checks that
/// the two are disjoint and that the complement is almost Webster.
pub fn special_two_exact_partition(cfg: &SpecialPairConfig, big_n: u64) -> SpecialReport {
    with_frame!(&cfg.triple.frame, f => special_in(f, big_n))
}

fn special_in<T: Coeff>(f: &Frame<T>, big_n: u64) -> SpecialReport {
    let mut rep =
        SpecialReport { n: big_n, first_overlap: None, ranks: 0, max_c_deviation: 0, first_bound_violation: None };
    if big_n == 0 {
        return rep;
    }
    let mut cur = TripleCursor::new(f, 1);
    loop {
        let m = cur.m();
        let r = cur.region(f);
        match (r.in_w_alpha(), r.in_w_beta()) {
            (true, true) => {
                rep.first_overlap.get_or_insert(m);
            }
            (false, false) => {
                rep.ranks += 1;
                let dev = m.abs_diff(f.lg.term(rep.ranks));
                rep.max_c_deviation = rep.max_c_deviation.max(dev);
                if dev > 1 {
                    rep.first_bound_violation.get_or_insert(rep.ranks);
                }
            }
            _ => {}
        }
        if m == big_n {
            return rep;
        }
        cur.step(f);
    }
}
