mod common;

use cursed::cse::{check_cse, is_chi_consistent, CseOptions};
use cursed::one_stage::{check_ce, enumerate_pure, Concept};
use cursed::profile::{format_shorthand, parse_profile, parse_shorthand};
use cursed::report::EquilibriumReport;
use cursed::scalar::{int, ratio, Rational};
use cursed::scenarios::{matching_game, signaling_game};
use cursed::sce::{check_sce, SceOptions};
use proptest::prelude::*;

use common::{random_game, random_mixed, Shape};

#[test]
fn pooling_beliefs_support_the_deviation_penalty() {
    let g = signaling_game(false);
    let pooling = parse_shorthand(&g, "[(B,B);(R,R)]").unwrap();
    let v = check_cse(&g, &pooling, &ratio(8, 9), None, &CseOptions::default()).unwrap();
    assert!(v.equilibrium);
    let a = g.parse_history("A").unwrap();
    assert_eq!(v.beliefs.get(1, 0, a)[0], ratio(1, 3));
    assert!(is_chi_consistent(&g, &pooling, &ratio(8, 9), &v.beliefs).is_ok());
    let again = check_cse(&g, &pooling, &ratio(8, 9), Some(&v.beliefs), &CseOptions::default()).unwrap();
    assert!(again.equilibrium);
}

#[test]
fn supplied_beliefs_must_be_consistent() {
    let g = signaling_game(false);
    let pooling = parse_shorthand(&g, "[(B,B);(R,R)]").unwrap();
    let v = check_cse(&g, &pooling, &int(0), None, &CseOptions::default()).unwrap();
    // at chi = 1 beliefs never move, so the chi = 0 beliefs after A fail
    let a = g.parse_history("A").unwrap();
    assert_ne!(v.beliefs.get(1, 0, a), g.conditional_prior::<Rational>(1, 0).as_slice());
    let bad = check_cse(&g, &pooling, &int(1), Some(&v.beliefs), &CseOptions::default()).unwrap();
    assert!(!bad.equilibrium);
}

#[test]
fn sce_reports_partition_status() {
    let g = signaling_game(false);
    let sigma = parse_profile(&g, "[(B,B);(L,R)]").unwrap();
    let v = check_sce(&g, &sigma, &ratio(1, 2), &int(0), &SceOptions::default()).unwrap();
    assert!(v.verdict.equilibrium);
    assert!(!v.partition_phc);
    let forced = check_sce(&g, &sigma, &ratio(1, 2), &int(0), &SceOptions { force_phc: true, ..SceOptions::default() }).unwrap();
    assert!(forced.forced_phc);
}

#[test]
fn sce_rejects_out_of_range_parameters() {
    let g = signaling_game(false);
    let sigma = parse_profile(&g, "[(B,B);(L,R)]").unwrap();
    assert!(check_sce(&g, &sigma, &ratio(3, 2), &int(0), &SceOptions::default()).is_err());
    assert!(check_cse(&g, &sigma, &int(-1), None, &CseOptions::default()).is_err());
}

#[test]
fn reports_are_deterministic() {
    let g = signaling_game(false);
    let sigma = parse_shorthand(&g, "[(A,A);(L,R)]").unwrap();
    let chi = ratio(1, 4);
    let render = || {
        let v = check_cse(&g, &sigma, &chi, None, &CseOptions::default()).unwrap();
        serde_json::to_string(&EquilibriumReport::cse(&g, &sigma, &chi, &v).to_json()).unwrap()
    };
    let first = render();
    assert_eq!(first, render());
    assert!(first.contains("\"verdict\":true"));
    assert!(first.contains("\"chi\":\"1/4\""));
}

#[test]
fn matching_equilibria_enumerate_in_order() {
    let g = matching_game(&ratio(1, 10)).unwrap();
    let eq = enumerate_pure(&g, &Concept::Ce(int(1))).unwrap();
    let names: Vec<String> = eq.iter().map(|s| format_shorthand(&g, s).unwrap()).collect();
    assert_eq!(names.len(), 2);
    assert!(names.iter().all(|n| n.contains("(b,r)")));
    assert!(check_ce(&g, &eq[0], &int(1)).unwrap().equilibrium);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    /// Exact and floating-point verdicts agree on random mixed profiles
    /// whenever the exact slack is not tiny.
    #[test]
    fn float_matches_exact(seed in any::<u64>(), k in 0i64..=4) {
        let g = random_game(seed, Shape::SMALL);
        let sigma = random_mixed(&g, seed);
        let chi = ratio(k, 4);
        let exact = check_cse(&g, &sigma, &chi, None, &CseOptions::default()).unwrap();
        let float = check_cse(&g, &sigma.to_f64(), &(k as f64 / 4.0), None, &CseOptions::default()).unwrap();
        if exact.worst_slack.clone() * exact.worst_slack.clone() > ratio(1, 1_000_000) {
            prop_assert_eq!(exact.equilibrium, float.equilibrium);
        }
    }
}
