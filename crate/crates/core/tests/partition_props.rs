use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tripart::analysis::{label_sweep, random_triple};
use tripart::partition::{
    a_tilde, assign, b_perturbation, b_tilde, c_perturbation, c_perturbation_table, c_tilde, e_beta, e_gamma,
    error_record, frac_state, wbeta_tilde_count, wgamma_tilde_count, DensityTriple, Label, Rule, TripleError,
};
use tripart::qfield::QuadExpr;

fn triple() -> impl Strategy<Value = DensityTriple> {
    any::<u64>().prop_map(|seed| random_triple(&mut ChaCha8Rng::seed_from_u64(seed), 60))
}

fn q(s: &str) -> QuadExpr {
    s.parse().unwrap()
}

fn canonical() -> DensityTriple {
    DensityTriple::new(q("sqrt(2)/4"), q("sqrt(3)/8")).unwrap()
}

/// The three parts listed term by term, stopping at terms above `big_n`.
fn parts(t: &DensityTriple, big_n: u64) -> [Vec<u64>; 3] {
    let collect = |f: &dyn Fn(u64) -> u64| (1..).map(f).take_while(|&m| m <= big_n).collect::<Vec<_>>();
    [collect(&|n| a_tilde(t, n)), collect(&|n| b_tilde(t, n).unwrap()), collect(&|n| c_tilde(t, n).unwrap())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn parts_tile_and_match_labels(t in triple()) {
        let big_n = 1500;
        let labels = label_sweep(&t, big_n);
        let [a, b, c] = parts(&t, big_n);
        prop_assert_eq!(a.len() + b.len() + c.len(), big_n as usize);
        for (part, label) in [(&a, Label::A), (&b, Label::B), (&c, Label::C)] {
            prop_assert!(part.windows(2).all(|w| w[0] < w[1]));
            for &m in part {
                prop_assert_eq!(labels[m as usize - 1], label, "m = {}", m);
            }
        }
    }

    #[test]
    fn a_part_is_exact_and_others_within_one(t in triple()) {
        for n in 1..400u64 {
            prop_assert_eq!(a_tilde(&t, n), t.alpha().term(n));
            let b = t.beta().term(n);
            let bt = b_tilde(&t, n).unwrap();
            prop_assert!(b.abs_diff(bt) <= 1);
            prop_assert_eq!(b_perturbation(&t, n).unwrap() as i64, b as i64 - bt as i64);
            let c = t.gamma().term(n);
            let ct = c_tilde(&t, n).unwrap();
            prop_assert!(c.abs_diff(ct) <= 1);
            prop_assert_eq!(c_perturbation(&t, n).unwrap() as i64, c as i64 - ct as i64);
            prop_assert_eq!(c_perturbation_table(&t, n).unwrap(), c_perturbation(&t, n).unwrap());
        }
    }

    #[test]
    fn counting_errors(t in triple()) {
        let mut counts = [0u64; 3];
        for m in 1..=1500u64 {
            counts[assign(&t, m).label as usize] += 1;
            prop_assert_eq!(counts[0], t.alpha().count(m));
            prop_assert_eq!(counts[1], wbeta_tilde_count(&t, m));
            prop_assert_eq!(counts[2], wgamma_tilde_count(&t, m));
            let eb = counts[1] as i64 - t.beta().count(m) as i64;
            let eg = counts[2] as i64 - t.gamma().count(m) as i64;
            prop_assert_eq!(e_beta(&t, m) as i64, eb);
            prop_assert_eq!(e_gamma(&t, m) as i64, eg);
            prop_assert!(eb.abs() <= 1 && eg.abs() <= 1);
            // the part counts sum to m, so the errors absorb the Webster surplus
            prop_assert_eq!(eb + eg, -((t.alpha().count(m) + t.beta().count(m) + t.gamma().count(m)) as i64 - m as i64));
        }
    }

    #[test]
    fn rules_follow_fractional_state(t in triple(), n in 1u64..50_000) {
        let s = frac_state(&t, n);
        let a = assign(&t, n);
        prop_assert_eq!(a.n, n);
        prop_assert_eq!(a.label == Label::A, s.u < *t.alpha().value());
        prop_assert_eq!(a.rule == Rule::A, a.label == Label::A);
        prop_assert_eq!(a.rule.label(), a.label);
        let r = error_record(&t, n).unwrap();
        for v in [r.e_beta, r.e_gamma, r.b_perturb, r.c_perturb] {
            prop_assert!((-1..=1).contains(&v));
        }
    }
}

#[test]
fn canonical_fixtures() {
    let t = canonical();
    let labels: String = (1..=20).map(|n| assign(&t, n).label.to_string()).collect();
    assert_eq!(labels, "CABCACBACACBACCABCAC");
    assert_eq!((1..=5).map(|n| c_tilde(&t, n).unwrap()).collect::<Vec<_>>(), [1, 4, 6, 9, 11]);
    assert_eq!(c_tilde(&t, 6).unwrap(), t.gamma().term(6) + 1);
    assert_eq!((t.beta().term(10), b_tilde(&t, 10).unwrap()), (44, 45));
    assert_eq!((t.beta().term(32), b_tilde(&t, 32).unwrap()), (146, 145));
    assert!((1..10).all(|n| b_tilde(&t, n).unwrap() == t.beta().term(n)));
    assert!((11..32).all(|n| b_tilde(&t, n).unwrap() >= t.beta().term(n)));
    assert!((t.gamma().to_f64() - 0.429_940_258_460_616_6).abs() < 1e-15);
}

#[test]
fn invalid_triples_name_their_clause() {
    let cases = [
        ("sqrt(2)/10", "sqrt(3)/3", "beta < 1/2"),
        ("sqrt(2)/2", "sqrt(3)/8", "alpha < gamma"),
        ("1/4", "sqrt(3)/8", "0 < x < 1, x irrational"),
        ("sqrt(2)/2", "sqrt(3)/2", "0 < x < 1, x irrational"),
    ];
    for (a, b, clause) in cases {
        let err = DensityTriple::new(q(a), q(b)).unwrap_err();
        assert_eq!(err.clause(), clause, "{a}, {b}: {err}");
    }
    let err = DensityTriple::from_parts(q("sqrt(2)/4"), q("sqrt(3)/8"), q("1/2")).unwrap_err();
    assert!(matches!(err, TripleError::SumNotOne(_)));
}

#[test]
fn relaxed_triples_skip_ordering() {
    let t = DensityTriple::relaxed(q("sqrt(2)/8"), q("sqrt(3)/3")).unwrap();
    assert!(!t.satisfies_ordering());
    assert!(canonical().satisfies_ordering());
}

#[test]
fn independence() {
    assert!(canonical().is_independent());
    let dep = DensityTriple::new(q("sqrt(2)/4"), q("sqrt(2)/8")).unwrap();
    assert!(!dep.is_independent());
    let dep = DensityTriple::new(q("sqrt(2)/4"), q("1/20 + sqrt(2)/16")).unwrap();
    assert!(!dep.is_independent());
    let ind = DensityTriple::new(q("sqrt(2)/4"), q("1/3 - sqrt(3)/8")).unwrap();
    assert!(ind.is_independent());
    for (name, ok) in canonical().derived_checks() {
        assert!(ok, "{name}");
    }
}
