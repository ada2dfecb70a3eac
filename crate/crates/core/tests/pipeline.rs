use genacc_core::cancel::{check_c_prime, dehn_reduce, is_lambda_reduced, Presentation};
use genacc_core::chains::{build_chain, Outcome, Strategy};
use genacc_core::generic::{
    lmk_condition_holds, sample_few_relator, validate_params, GenericityParams, LengthMode,
    DEFAULT_NODE_CAP,
};
use genacc_core::minimize::{arc_labels, membership, minimize, MinimizeOptions};
use genacc_core::rng::stream;
use genacc_core::words::{sample_reduced, Word};
use genacc_core::Rational;
use proptest::prelude::*;
use rand::Rng;

fn valid_params(m: usize) -> GenericityParams {
    GenericityParams {
        m,
        t: 1,
        k: m,
        lambda: Rational::new(1, 200),
        mu: Rational::new(1, 2),
        density: None,
    }
}

fn valid_presentation(m: usize, seed: u64) -> Presentation {
    let gp = valid_params(m);
    (0..)
        .map(|i| {
            let mut rng = stream(seed, &[i]);
            sample_few_relator(m, 1, m, LengthMode::Exact, &mut rng).unwrap()
        })
        .find(|p| lmk_condition_holds(p, &gp, DEFAULT_NODE_CAP).unwrap())
        .unwrap()
}

const CHECKED: MinimizeOptions = MinimizeOptions {
    skip_condition_check: false,
    node_cap: DEFAULT_NODE_CAP,
};

#[test]
fn sampled_valid_presentations_pass_every_gate() {
    for m in 2..=5 {
        let gp = valid_params(m);
        assert!(validate_params(&gp).valid());
        let p = valid_presentation(m, m as u64);
        assert!(check_c_prime(&p, gp.lambda).unwrap().holds);
        assert_eq!(p.max_relator_len(), m);
    }
}

#[test]
fn sample_minimize_and_query() {
    let p = valid_presentation(3, 1);
    let gp = valid_params(3);
    let r = p.relators()[0].representative().clone();
    let conj = Word::parse("ab", 3).unwrap();
    let gens = vec![
        conj.mul(&r)
            .mul(&conj.inverse())
            .mul(&Word::parse("aa", 3).unwrap()),
        Word::parse("b", 3).unwrap(),
    ];
    let out = minimize(&p, &gp, &gens, CHECKED).unwrap();
    assert!(out.moves().count() >= 1);
    assert!(out.rep.minimal_certified);
    for l in arc_labels(&out.rep.graph) {
        assert!(is_lambda_reduced(&l, &p, gp.lambda).unwrap().reduced);
    }
    for w in ["aa", "b", "aab", "bAAbb"] {
        assert!(
            membership(&out.rep, &Word::parse(w, 3).unwrap()).unwrap(),
            "{w}"
        );
    }
    for w in ["a", "ab", "c"] {
        assert!(
            !membership(&out.rep, &Word::parse(w, 3).unwrap()).unwrap(),
            "{w}"
        );
    }
}

#[test]
fn chains_over_a_valid_presentation_end_cleanly() {
    let p = valid_presentation(3, 2);
    let gp = valid_params(3);
    for seed in 0..10 {
        let c = build_chain(&p, &gp, Strategy::All, 15, seed).unwrap();
        assert!(!c.steps.is_empty());
        assert_ne!(c.outcome, Outcome::BudgetExhausted);
        assert_eq!(c, build_chain(&p, &gp, Strategy::All, 15, seed).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Products of generators stay members after minimization, and Dehn
    /// reduction never changes membership.
    #[test]
    fn generator_products_are_members(seed in any::<u64>(), m in 2usize..=4) {
        let p = valid_presentation(m, seed % 8);
        let gp = valid_params(m);
        let mut rng = stream(seed, &[]);
        let gens: Vec<Word> = (0..rng.gen_range(1..=m))
            .map(|_| sample_reduced(rng.gen_range(1..=6), m, &mut rng))
            .collect();
        let out = minimize(&p, &gp, &gens, CHECKED).unwrap();
        let mut product = Word::empty();
        for _ in 0..4 {
            let g = &gens[rng.gen_range(0..gens.len())];
            let g = if rng.gen_bool(0.5) { g.clone() } else { g.inverse() };
            product = product.mul(&g);
        }
        prop_assert!(membership(&out.rep, &product).unwrap());
        let x = sample_reduced(rng.gen_range(0..10), m, &mut rng);
        prop_assert_eq!(
            membership(&out.rep, &x).unwrap(),
            membership(&out.rep, &dehn_reduce(&x, &p).unwrap()).unwrap()
        );
    }
}
