mod common;

use cursed::dsl::{parse_game, write_game, SIGNALING_FIXTURE};
use cursed::error::ParseError;
use cursed::partition::coarsest_valid_partition;
use cursed::profile::PureSpace;
use cursed::scalar::{int, ratio};
use cursed::scramble::{base_label, is_scrambled, scramble};
use proptest::prelude::*;

use common::{random_game, Shape};

#[test]
fn fixture_parses_with_expected_shape() {
    let g = parse_game(SIGNALING_FIXTURE).unwrap();
    assert_eq!(g.players(), 2);
    assert_eq!(g.horizon(), 2);
    assert_eq!(g.prior_exact(), &[ratio(1, 4), ratio(3, 4)]);
    assert_eq!(g.terminals().len(), 4);
    let t2 = g.types().encode(&[1, 0]);
    let ar = g.parse_history("A R").unwrap();
    assert_eq!(g.payoff_exact(ar, t2, 0), &int(-1));
    assert!(!coarsest_valid_partition(&g, false).phc());
}

#[test]
fn syntax_errors_carry_positions() {
    let bad = SIGNALING_FIXTURE.replace("players 2", "players two");
    match parse_game(&bad) {
        Err(e @ ParseError::Syntax { .. }) => assert!(e.to_string().starts_with("4:")),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn missing_payoff_is_rejected() {
    let bad = SIGNALING_FIXTURE.replace("payoffs: (t2, B R) = (1, 0)\n", "");
    assert!(parse_game(&bad).is_err());
}

#[test]
fn scrambled_fixture_satisfies_phc() {
    let g = parse_game(SIGNALING_FIXTURE).unwrap();
    let s = scramble(&g);
    assert!(is_scrambled(&s));
    assert!(!is_scrambled(&g));
    assert!(coarsest_valid_partition(&s, false).phc());
    assert_eq!(scramble(&s), s);
    let labels: Vec<&str> = s.history(s.root()).actions[0].iter().map(|a| base_label(a)).collect();
    assert_eq!(labels, ["A", "B"]);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn written_games_parse_back(seed in any::<u64>()) {
        let g = random_game(seed, Shape::SMALL);
        let back = parse_game(&write_game(&g)).unwrap();
        prop_assert_eq!(write_game(&back), write_game(&g));
        prop_assert_eq!(back.histories().len(), g.histories().len());
    }

    #[test]
    fn scrambling_keeps_structure(seed in any::<u64>()) {
        let g = random_game(seed, Shape::SMALL);
        let s = scramble(&g);
        prop_assert!(coarsest_valid_partition(&s, false).phc());
        prop_assert_eq!(PureSpace::new(&s).total(), PureSpace::new(&g).total());
        prop_assert_eq!(scramble(&s), s.clone());
        for h in g.non_terminal() {
            prop_assert_eq!(&g.history(h).actions.iter().map(Vec::len).collect::<Vec<_>>(),
                            &s.history(h).actions.iter().map(Vec::len).collect::<Vec<_>>());
        }
    }
}
