use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tripart::analysis::{
    discrepancy, empirical_error_densities, find_adjacent_pair_witness, find_optimality_witness, label_sweep,
    mean_square_errors, probe_violated_hypotheses, random_triple, run_check, special_two_exact_partition, verify,
    verify_quota, AnalysisError, Check, Evaluation, SpecialPairConfig, VerifyOptions, WitnessKind,
};
use tripart::partition::{assign, DensityTriple};
use tripart::qfield::QuadExpr;
use tripart::webster::Density;

fn q(s: &str) -> QuadExpr {
    s.parse().unwrap()
}

fn canonical() -> DensityTriple {
    DensityTriple::new(q("sqrt(2)/4"), q("sqrt(3)/8")).unwrap()
}

fn random_triples(seed: u64, k: usize) -> Vec<DensityTriple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| random_triple(&mut rng, 50)).collect()
}

#[test]
fn all_checks_pass_on_random_triples() {
    for t in random_triples(7, 6) {
        for o in verify(&t, 20_000, &Check::ALL, &VerifyOptions::default()) {
            assert!(o.passed, "{} on ({}, {}): {:?}", o.check, t.alpha().value(), t.beta().value(), o.witness);
            assert!(o.examined > 0);
        }
    }
}

#[test]
fn corrupted_term_is_caught() {
    let t = canonical();
    for rank in [1u64, 10, 32, 777] {
        let opts = VerifyOptions { corrupt_b_tilde_at: Some(rank) };
        let out = run_check(&t, 5_000, Check::Equivalence, &opts);
        assert!(!out.passed, "rank {rank}");
        assert!(out.witness.is_some());
        assert!(run_check(&t, 5_000, Check::Partition, &opts).passed);
    }
    // b_tilde(10) = b(10) + 1 already, so one more breaks the bound there
    let opts = VerifyOptions { corrupt_b_tilde_at: Some(10) };
    let out = run_check(&t, 5_000, Check::Perturbation, &opts);
    assert!(!out.passed);
    assert_eq!(out.witness.map(|w| w.0), Some(10));
}

#[test]
fn quota_holds_and_reports_exact_slack() {
    for t in random_triples(11, 4) {
        let rep = verify_quota(&t, 50_000);
        assert!(rep.passed(), "{:?}", rep.violations.first());
        assert_eq!(rep.violation_count, 0);
        assert_eq!(rep.n, 50_000);
    }
}

#[test]
fn probe_finds_stray_terms_without_ordering() {
    // beta > 1/2: the leftover C terms drift two or more from W_gamma
    let t = DensityTriple::relaxed(q("sqrt(2)/8"), q("sqrt(3)/3")).unwrap();
    let w = probe_violated_hypotheses(&t, 20_000).expect("a rank strays by two");
    assert!(w.c_tilde.abs_diff(w.c) >= 2);
    assert_eq!(probe_violated_hypotheses(&canonical(), 20_000), None);
}

#[test]
fn evaluation_modes_agree() {
    let t = canonical();
    for n in [1u64, 2, 999, 40_000] {
        let a = empirical_error_densities(&t, n, Evaluation::Incremental);
        let b = empirical_error_densities(&t, n, Evaluation::Independent);
        assert_eq!(a, b, "N = {n}");
    }
}

#[test]
fn densities_approach_their_limits() {
    let t = random_triples(3, 1).pop().unwrap();
    let rep = empirical_error_densities(&t, 200_000, Evaluation::Incremental);
    let th = rep.theory;
    assert!((rep.e_beta.freq(1) - th.e_beta_pm).abs() < 0.01);
    assert!((rep.e_beta.freq(-1) - th.e_beta_pm).abs() < 0.01);
    assert!((rep.e_gamma.freq(1) - th.e_gamma_pm).abs() < 0.01);
    assert!((rep.e_gamma.freq(0) - th.e_gamma_zero).abs() < 0.01);
    assert!((rep.b_perturb.freq(1) - th.b_pm).abs() < 0.01);
    assert!((rep.c_perturb.freq(-1) - th.c_pm).abs() < 0.01);
    let ms = mean_square_errors(&t, 200_000);
    assert_eq!(ms, rep.mean_squares);
    assert_eq!(ms.omega_hat, &ms.d_beta_hat + &ms.d_gamma_hat);
    let f = |r: &tripart::qfield::Rational| num_traits::ToPrimitive::to_f64(r).unwrap();
    assert!((f(&ms.omega_small_hat) - 0.25).abs() < 0.01);
    assert!(ms.misplaced_hat <= ms.omega_small_hat);
}

#[test]
fn discrepancy_shrinks_and_needs_independence() {
    let t = canonical();
    let small = discrepancy(&t, 1_000).unwrap();
    let large = discrepancy(&t, 100_000).unwrap();
    assert!(large < small && large < 0.01, "{small} -> {large}");
    let dep = DensityTriple::new(q("sqrt(2)/4"), q("sqrt(2)/8")).unwrap();
    assert_eq!(discrepancy(&dep, 100), Err(AnalysisError::NotIndependent));
}

#[test]
fn optimality_witnesses() {
    let t = canonical();
    assert_eq!(find_optimality_witness(&t, WitnessKind::CaseII, 100_000), Ok(Some(322)));
    assert_eq!(find_optimality_witness(&t, WitnessKind::CaseII, 321), Ok(None));
    assert!(matches!(find_optimality_witness(&t, WitnessKind::CaseI, 1000), Err(AnalysisError::HypothesisViolated(_))));
    let small_alpha = DensityTriple::new(q("sqrt(2)/8"), q("sqrt(3)/8")).unwrap();
    assert!(find_optimality_witness(&small_alpha, WitnessKind::CaseII, 1000).is_err());

    let a = Density::new(q("sqrt(2)/2")).unwrap();
    let b = Density::new(q("sqrt(3)/8")).unwrap();
    let m = find_adjacent_pair_witness(&a, &b, 10_000).unwrap().expect("pattern occurs");
    assert!(a.is_member(m) && b.is_member(m) && a.is_member(m + 1));
    let low = Density::new(q("sqrt(2)/4")).unwrap();
    assert!(find_adjacent_pair_witness(&low, &b, 100).is_err());
}

#[test]
fn two_exact_parts_configuration() {
    let cfg = SpecialPairConfig::new(2, 4, q("sqrt(2)/4"), q("1/4 - sqrt(2)/8")).unwrap();
    let rep = special_two_exact_partition(&cfg, 20_000);
    assert!(rep.passed());
    assert_eq!(rep.first_overlap, None);
    assert!(rep.max_c_deviation <= 1);
    assert!(rep.ranks > 0);
    // parity, positivity and the linear relation are all enforced
    assert!(SpecialPairConfig::new(2, 3, q("sqrt(2)/4"), q("1/3 - sqrt(2)/6")).is_err());
    assert!(SpecialPairConfig::new(2, 4, q("sqrt(2)/4"), q("sqrt(3)/8")).is_err());
    assert!(SpecialPairConfig::new(1, 3, q("sqrt(2)/4"), q("1/3 - sqrt(2)/12")).is_err());
}

#[test]
fn label_sweep_matches_pointwise_assignment() {
    for t in random_triples(5, 3) {
        let labels = label_sweep(&t, 3_000);
        for (i, l) in labels.iter().enumerate() {
            assert_eq!(*l, assign(&t, i as u64 + 1).label);
        }
    }
}
