//! Exact three-part partitions of the positive integers into one Webster
//! sequence and two almost-Webster sequences with prescribed irrational
//! densities.
//!
//! The crate is organized bottom-up:
//!
//! - [`qfield`]: exact arithmetic on `p + q1*sqrt(d1) + q2*sqrt(d2)`.
//! - [`webster`]: single Webster/Beatty sequences (terms, counts, gaps).
//! - [`partition`]: the term-wise and assignment-wise partition algorithms,
//!   counting errors and per-rank perturbations, all O(1) per query.
//! - [`analysis`]: sweeps that audit quota, error densities, mean squares,
//!   equidistribution and optimality witnesses.
//! - [`scheduler`]: finite fair schedules from integer demands.

pub mod qfield;

pub mod analysis;
mod kernel;
pub mod partition;
pub mod scheduler;
pub mod webster;
