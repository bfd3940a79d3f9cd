use cursed::scalar::{int, ratio};
use cursed::scenarios::claims::{verify_claim, CLAIM_IDS};
use cursed::scenarios::cutoffs::{cutoff_cse, engine_cutoff_cse, Cutoff};
use cursed::scenarios::{broadcaster_game, matching_game, perfect_info_game};
use proptest::prelude::*;

#[test]
fn every_claim_verifies_on_its_default_grid() {
    for id in CLAIM_IDS {
        let report = verify_claim(id, None).unwrap();
        assert!(report.passed, "{id}: {:?}", report.mismatches);
        assert!(report.mismatches.is_empty());
        assert!(!report.checks.is_empty());
    }
}

#[test]
fn unknown_claims_are_rejected() {
    assert!(verify_claim("C99", None).is_err());
}

#[test]
fn parameters_are_validated() {
    assert!(broadcaster_game(2, &int(0)).is_err());
    assert!(broadcaster_game(0, &ratio(1, 2)).is_err());
    assert!(perfect_info_game(&int(0), &ratio(3, 2)).is_err());
    assert!(matching_game(&ratio(1, 2)).is_err());
}

#[test]
fn claim_reports_serialize_without_runtime() {
    let report = verify_claim("C5", None).unwrap();
    let text = serde_json::to_string(&report).unwrap();
    assert!(!text.contains("runtime"));
    assert_eq!(text, serde_json::to_string(&verify_claim("C5", None).unwrap()).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    /// The engine cutoff on two listeners matches the closed form for
    /// random α and χ.
    #[test]
    fn engine_tracks_closed_form(a in 1i64..20, c in 0i64..=40) {
        let alpha = ratio(a, 20);
        let chi = ratio(c, 40);
        let engine = engine_cutoff_cse(&alpha, &chi, 2).unwrap();
        prop_assert_eq!(engine.cutoff, cutoff_cse(&alpha, &chi, 2));
        prop_assert!(engine.monotone());
        if engine.cutoff == Cutoff::Never {
            prop_assert!(engine.risky.iter().all(|r| !r));
        }
    }
}
