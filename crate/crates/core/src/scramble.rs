//! Action relabeling that makes label sets disjoint across histories.

use crate::game::{Game, GameBuilder, HistoryView};

/// Relabels every action `a` at history `h ∈ H^t` to `a@h<t>:<k>`, where
/// `k` is the position of `h` within stage `t`. Existing suffixes are
/// replaced, so scrambling twice gives the same game.
pub fn scramble(game: &Game) -> Game {
    let ts = game.types();
    let labels: Vec<Vec<String>> = (0..game.players()).map(|i| ts.labels(i).to_vec()).collect();
    let old = |view: &HistoryView| game.stage(view.stage).start + view.index_in_stage;
    GameBuilder::new(game.name(), labels, game.prior_exact().to_vec(), game.horizon())
        .build(
            |i, view| {
                let h = game.history(old(view));
                Ok(h.actions[i]
                    .iter()
                    .map(|a| format!("{}@h{}:{}", base_label(a), view.stage, view.index_in_stage))
                    .collect())
            },
            |types, view| {
                let h = old(view);
                let k = ts.encode(types);
                Ok((0..game.players()).map(|i| game.payoff_exact(h, k, i).clone()).collect())
            },
        )
        .expect("relabeling preserves validity")
}

/// Label with any scramble suffix removed.
pub fn base_label(label: &str) -> &str {
    label.split('@').next().unwrap_or(label)
}

/// True iff, for every player and stage, the action sets at distinct
/// histories of that stage are disjoint.
pub fn is_scrambled(game: &Game) -> bool {
    (0..game.horizon()).all(|t| {
        let hs: Vec<_> = game.stage(t).collect();
        (0..game.players()).all(|i| {
            let mut seen = std::collections::HashSet::new();
            hs.iter()
                .all(|&h| game.history(h).actions[i].iter().all(|a| seen.insert(a.as_str())))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_game, SIGNALING_FIXTURE};

    #[test]
    fn signaling_receiver_labels_split() {
        let g = parse_game(SIGNALING_FIXTURE).unwrap();
        assert!(!is_scrambled(&g));
        let s = scramble(&g);
        assert!(is_scrambled(&s));
        let a = s.parse_history("A@h0:0").unwrap();
        let b = s.parse_history("B@h0:0").unwrap();
        assert_eq!(s.history(a).actions[1], vec!["L@h1:0", "R@h1:0"]);
        assert_eq!(s.history(b).actions[1], vec!["L@h1:1", "R@h1:1"]);
        assert_eq!(scramble(&s), s);
    }
}
