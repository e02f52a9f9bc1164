//! Chunked sweeps over consecutive indices.
//!
//! Each chunk folds its indices into an accumulator; accumulators are merged
//! left to right in index order, so results do not depend on the number of
//! workers.

use std::thread;

use crate::partition::frame::{Frame, Region, TripleCursor};
use crate::qfield::Coeff;

/// Environment variable holding the number of sweep workers.
pub const WORKERS_ENV: &str = "TRIPART_WORKERS";

/// Below this many indices a sweep always runs on the calling thread.
const MIN_PARALLEL_LEN: u64 = 1 << 15;

/// How per-index states are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Evaluation {
    /// Step `(u, v)` from one index to the next (one exact comparison per
    /// coordinate per step).
    #[default]
    Incremental,
    /// Recompute `(u, v)` from scratch at every index.
    Independent,
}

pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or_else(|| thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// State handed to sweep visitors at index `m`.
pub(crate) struct Step {
    pub m: u64,
    pub region: Region,
    /// `W_alpha(m)`
    pub count_a: u64,
    /// `W_beta(m)`
    pub count_b: u64,
}

pub(crate) fn sweep<T, A, I, V, M>(f: &Frame<T>, lo: u64, hi: u64, eval: Evaluation, init: I, visit: V, merge: M) -> A
where
    T: Coeff,
    A: Send,
    I: Fn(u64) -> A + Sync,
    V: Fn(&mut A, &Step) + Sync,
    M: Fn(A, A) -> A,
{
    assert!(lo >= 1, "sweeps start at index 1 or later");
    if lo > hi {
        return init(lo);
    }
    let len = hi - lo + 1;
    let workers = worker_count() as u64;
    if workers <= 1 || len < MIN_PARALLEL_LEN {
        return run_chunk(f, lo, hi, eval, &init, &visit);
    }
    let per = len.div_ceil(workers);
    let bounds: Vec<(u64, u64)> =
        (0..workers).map(|i| (lo + i * per, (lo + (i + 1) * per - 1).min(hi))).filter(|(a, b)| a <= b).collect();
    let results: Vec<A> = thread::scope(|s| {
        let handles: Vec<_> = bounds
            .iter()
            .map(|&(a, b)| {
                let (init, visit) = (&init, &visit);
                s.spawn(move || run_chunk(f, a, b, eval, init, visit))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    results.into_iter().reduce(merge).expect("at least one chunk")
}

fn run_chunk<T: Coeff, A>(
    f: &Frame<T>,
    lo: u64,
    hi: u64,
    eval: Evaluation,
    init: &impl Fn(u64) -> A,
    visit: &impl Fn(&mut A, &Step),
) -> A {
    let mut acc = init(lo);
    match eval {
        Evaluation::Independent => {
            for m in lo..=hi {
                let step = Step { m, region: f.region(m), count_a: f.la.count(m), count_b: f.lb.count(m) };
                visit(&mut acc, &step);
            }
        }
        Evaluation::Incremental => {
            let mut cur = TripleCursor::new(f, lo);
            loop {
                let step = Step { m: cur.m(), region: cur.region(f), count_a: cur.count_a(), count_b: cur.count_b() };
                visit(&mut acc, &step);
                if cur.m() == hi {
                    break;
                }
                cur.step(f);
            }
        }
    }
    acc
}
