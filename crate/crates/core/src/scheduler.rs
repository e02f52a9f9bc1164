//! Fair production schedules for three products with integer demands.
//!
//! Demands `d1, d2, d3` over a horizon `N = d1 + d2 + d3` give rational
//! target rates `di/N`. The partition algorithms need irrational densities,
//! so the rates are nudged by
//!
//! ```text
//! alpha = d_alpha/N - sqrt(2)/(8 N^2)
//! beta  = d_beta/N  - sqrt(3)/(8 N^2)
//! gamma = 1 - alpha - beta = d_gamma/N + (sqrt(2) + sqrt(3))/(8 N^2)
//! ```
//!
//! Each shift is below `1/(2 N^2)`, so for `n <= N` the quantity `n * rate`
//! moves by less than `1/(2N)`. The quota property of the perturbed triple
//! then keeps every running count within `1 + 1/(2N)` of `n * di/N`, and at
//! `n = N` (where `N * di/N` is an integer and the slack is below one) the
//! totals equal the demands exactly.
//!
//! Demands are matched to the roles `(alpha, beta, gamma)` by trying the
//! identity first and then the remaining permutations in lexicographic
//! order; putting the smallest demand on `beta` always works.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::analysis::label_sweep;
use crate::partition::{DensityTriple, Label};
use crate::qfield::{QuadExpr, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleError {
    #[error("infeasible demands: {0}")]
    InfeasibleDemands(String),
    #[error("only three products are supported, got {0}")]
    UnsupportedArity(usize),
}

/// Three positive demands; the horizon is their sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DemandSpec {
    demands: [u64; 3],
}

impl DemandSpec {
    pub fn new(demands: [u64; 3]) -> Result<Self, ScheduleError> {
        if let Some(i) = demands.iter().position(|&d| d == 0) {
            return Err(ScheduleError::InfeasibleDemands(format!("demand {} is zero", i + 1)));
        }
        if demands.iter().try_fold(0u64, |acc, &d| acc.checked_add(d)).is_none_or(|n| n > 1 << 31) {
            return Err(ScheduleError::InfeasibleDemands("horizon too large".into()));
        }
        Ok(DemandSpec { demands })
    }

    /// Accepts any number of demands but only builds schedules for three.
    pub fn from_slice(demands: &[u64]) -> Result<Self, ScheduleError> {
        match demands {
            [a, b, c] => Self::new([*a, *b, *c]),
            _ => Err(ScheduleError::UnsupportedArity(demands.len())),
        }
    }

    pub fn demands(&self) -> [u64; 3] {
        self.demands
    }

    pub fn horizon(&self) -> u64 {
        self.demands.iter().sum()
    }
}

/// The perturbed triple and which demand plays which role.
#[derive(Clone, Debug)]
pub struct Irrationalized {
    pub triple: DensityTriple,
    /// `roles[j]` is the index of the demand used as `alpha`, `beta`,
    /// `gamma` for `j = 0, 1, 2`.
    pub roles: [usize; 3],
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn perturbed(d: u64, big_n: u64, radicand: u64) -> QuadExpr {
    let n = BigInt::from(big_n);
    let shift = Rational::new(BigInt::from(-1), BigInt::from(8) * &n * &n);
    QuadExpr::term(shift, radicand).expect("small radicand").add_rational(&Rational::new(BigInt::from(d), n))
}

/// A valid irrational triple within `1/(2N^2)` of the demand rates.
pub fn irrationalize(spec: &DemandSpec) -> Result<Irrationalized, ScheduleError> {
    let n = spec.horizon();
    let d = spec.demands;
    for roles in PERMUTATIONS {
        let alpha = perturbed(d[roles[0]], n, 2);
        let beta = perturbed(d[roles[1]], n, 3);
        if let Ok(triple) = DensityTriple::new(alpha, beta) {
            return Ok(Irrationalized { triple, roles });
        }
    }
    Err(ScheduleError::InfeasibleDemands(format!("no role assignment of {d:?} is valid")))
}

/// One slot per unit of time; `slots[n - 1]` names the product made at
/// time `n` (`A`, `B`, `C` for the first, second and third demand).
#[derive(Clone, Debug)]
pub struct Schedule {
    pub spec: DemandSpec,
    pub roles: [usize; 3],
    pub triple: DensityTriple,
    pub slots: Vec<Label>,
    /// Realized totals per product.
    pub counts: [u64; 3],
    /// `max |count(i, n) - n*di/N|` over all `n <= N` and products.
    pub fairness: Rational,
}

const PRODUCT_LABELS: [Label; 3] = [Label::A, Label::B, Label::C];

impl Schedule {
    /// Running counts and deviation after each slot.
    pub fn rows(&self) -> Vec<ScheduleRow> {
        let big_n = self.spec.horizon();
        let mut counts = [0u64; 3];
        self.slots
            .iter()
            .enumerate()
            .map(|(i, &label)| {
                let n = i as u64 + 1;
                counts[label as usize] += 1;
                ScheduleRow { n, label, counts, deviation: deviation(&counts, n, &self.spec.demands, big_n) }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleRow {
    pub n: u64,
    pub label: Label,
    pub counts: [u64; 3],
    /// `max_i |counts[i] - n*di/N|`
    pub deviation: Rational,
}

fn deviation(counts: &[u64; 3], n: u64, d: &[u64; 3], big_n: u64) -> Rational {
    counts
        .iter()
        .zip(d)
        .map(|(&c, &di)| {
            let num = BigInt::from(c) * big_n - BigInt::from(n) * di;
            Rational::new(num.abs(), BigInt::from(big_n))
        })
        .max_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
        .expect("three products")
}

/// Assigns each time slot `1..=N` by the labelling rule of the perturbed
/// triple, then maps roles back to products.
pub fn build_schedule(spec: &DemandSpec) -> Result<Schedule, ScheduleError> {
    let Irrationalized { triple, roles } = irrationalize(spec)?;
    let big_n = spec.horizon();
    let slots: Vec<Label> =
        label_sweep(&triple, big_n).into_iter().map(|role_label| PRODUCT_LABELS[roles[role_label as usize]]).collect();
    let mut sched = Schedule {
        spec: *spec,
        roles,
        triple,
        slots,
        counts: [0; 3],
        fairness: Rational::from_integer(BigInt::from(0)),
    };
    for row in sched.rows() {
        sched.counts = row.counts;
        if row.deviation > sched.fairness {
            sched.fairness = row.deviation;
        }
    }
    Ok(sched)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: [u64; 3]) -> DemandSpec {
        DemandSpec::new(d).unwrap()
    }

    #[test]
    fn identity_roles_when_valid() {
        let r = irrationalize(&spec([2, 3, 5])).unwrap();
        assert_eq!(r.roles, [0, 1, 2]);
        let t = &r.triple;
        assert!((t.alpha().to_f64() - 0.2).abs() < 0.0025);
        assert!((t.beta().to_f64() - 0.3).abs() < 0.0025);
        assert!((t.gamma().to_f64() - 0.5).abs() < 0.005);
    }

    #[test]
    fn permutes_roles_when_needed() {
        let r = irrationalize(&spec([6, 1, 1])).unwrap();
        assert_ne!(r.roles, [0, 1, 2]);
        assert_eq!(r.roles[2], 0, "the large demand must take the gamma role");
        let r = irrationalize(&spec([1, 1, 1])).unwrap();
        assert_eq!(r.roles, [0, 1, 2]);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(DemandSpec::new([0, 1, 1]), Err(ScheduleError::InfeasibleDemands(_))));
        assert_eq!(DemandSpec::from_slice(&[1, 2]), Err(ScheduleError::UnsupportedArity(2)));
        assert_eq!(DemandSpec::from_slice(&[1, 2, 3, 4]), Err(ScheduleError::UnsupportedArity(4)));
    }

    #[test]
    fn schedules_hit_totals() {
        for d in [[2, 3, 5], [1, 1, 1], [6, 1, 1], [1, 7, 2]] {
            let s = build_schedule(&spec(d)).unwrap();
            assert_eq!(s.counts, d);
            assert_eq!(s.slots.len() as u64, s.spec.horizon());
            let n = s.spec.horizon();
            let bound = Rational::new(BigInt::from(2 * n + 1), BigInt::from(2 * n));
            assert!(s.fairness <= bound, "{d:?}: {}", s.fairness);
        }
    }
}
