//! Sweeps and statistics over the partition: quota audits, error
//! frequencies against their closed-form limits, mean squares,
//! equidistribution, optimality witnesses and special configurations.
//!
//! Sweeps split `1..=N` into contiguous chunks, one per worker (set with the
//! `TRIPART_WORKERS` environment variable), and merge chunk results in index
//! order, so every report is independent of the worker count.

mod random;
mod special;
mod stats;
mod sweep;
mod verify;
mod witness;

pub use random::random_triple;
pub use special::{special_two_exact_partition, SpecialPairConfig, SpecialReport};
pub use stats::{
    discrepancy, empirical_error_densities, mean_square_errors, DensityReport, Freq, MeanSquares, Theory, GRID,
};
pub use sweep::{worker_count, Evaluation, WORKERS_ENV};
pub use verify::{run_check, verify, verify_quota, Check, CheckOutcome, QuotaReport, QuotaViolation, VerifyOptions};
pub use witness::{
    find_adjacent_pair_witness, find_optimality_witness, label_sweep, probe_violated_hypotheses, ProbeWitness,
    WitnessKind,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("1, alpha, beta are not linearly independent over the rationals")]
    NotIndependent,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}
