//! Sweep results must not depend on the number of workers. Kept in its own
//! test binary because it sets the worker environment variable.

use tripart::analysis::{
    empirical_error_densities, verify, verify_quota, Check, Evaluation, VerifyOptions, WORKERS_ENV,
};
use tripart::partition::DensityTriple;

#[test]
fn reports_are_independent_of_worker_count() {
    let t = DensityTriple::new("sqrt(2)/4".parse().unwrap(), "sqrt(3)/8".parse().unwrap()).unwrap();
    let n = 120_000;
    let opts = VerifyOptions { corrupt_b_tilde_at: Some(20_000) };
    let run = |w: &str| {
        std::env::set_var(WORKERS_ENV, w);
        (
            empirical_error_densities(&t, n, Evaluation::Incremental),
            verify(&t, n, &Check::ALL, &opts),
            verify_quota(&t, n),
        )
    };
    let (d1, v1, q1) = run("1");
    for w in ["2", "3", "7"] {
        let (d, v, q) = run(w);
        assert_eq!(d, d1, "{w} workers");
        assert_eq!(v, v1, "{w} workers");
        assert_eq!(q, q1, "{w} workers");
    }
    assert!(v1.iter().any(|o| !o.passed), "the injected fault is seen");
}
