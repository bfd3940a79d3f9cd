//! Cutoff listeners in the broadcaster game when every announcement is `g`.
//!
//! Closed forms are set against the engines: a candidate profile has the
//! broadcaster truthful and each listener best-responding at every history
//! in the perceived model, and is then checked as a whole. Listener payoffs
//! ignore other listeners, so best responses can be taken one at a time.

use std::fmt;

use crate::cse::{action_values_cse, check_cse, consistency_extend, CseOptions};
use crate::error::ScenarioError;
use crate::game::{Game, HistoryId};
use crate::partition::coarsest_valid_partition;
use crate::perceived::Continuation;
use crate::profile::Profile;
use crate::scalar::{le_root, Rational, Scalar};
use crate::sce::{weights, SceContext};
use crate::tremble::TrembleFamily;

use super::games::broadcaster_game;

/// Listeners in a game built for engine cross-checks; later listeners do
/// not affect earlier ones.
pub const ENGINE_MAX_LISTENERS: usize = 6;

/// First listener (1-based) to take `r`, or none of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    Player(usize),
    Never,
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::Player(i) => write!(f, "{i}"),
            Cutoff::Never => write!(f, "s̄"),
        }
    }
}

/// `2α/(1+α)`.
pub fn threshold<S: Scalar>(alpha: &S) -> S {
    S::from_ratio(2, 1) * alpha.clone() / (S::one() + alpha.clone())
}

/// `1` if `χ_S(1−ψ_S) ≤ 2α/(1+α)`, else nobody.
pub fn cutoff_sce<S: Scalar>(alpha: &S, chi_s: &S, psi_s: &S) -> Cutoff {
    let k = chi_s.clone() * (S::one() - psi_s.clone());
    if threshold(alpha).approx_ge(&k) {
        Cutoff::Player(1)
    } else {
        Cutoff::Never
    }
}

/// Smallest `i ≤ n` with `χ ≤ (2α/(1+α))^{1/i}`, else nobody.
pub fn cutoff_cse<S: Scalar>(alpha: &S, chi: &S, n: usize) -> Cutoff {
    let tau = threshold(alpha);
    (1..=n)
        .find(|&i| le_root(chi, &tau, i as u32))
        .map_or(Cutoff::Never, Cutoff::Player)
}

/// Engine result: the cutoff and each listener's move along the all-`g`
/// path (`true` for `r`).
#[derive(Debug, Clone, PartialEq)]
pub struct EngineCutoff {
    pub cutoff: Cutoff,
    pub risky: Vec<bool>,
    /// Listeners covered by the game the engine ran on.
    pub listeners: usize,
}

impl EngineCutoff {
    /// Once a listener takes `r`, every later one does too.
    pub fn monotone(&self) -> bool {
        self.risky.windows(2).all(|w| !w[0] || w[1])
    }
}

fn mover(game: &Game, h: HistoryId) -> Option<usize> {
    game.history(h).movers().first().copied()
}

/// Truthful broadcaster; listeners play `s` everywhere.
fn truthful<S: Scalar>(game: &Game) -> Profile<S> {
    Profile::pure(game, |i, t, h| if i == 0 && game.history(h).action_count(0) > 1 { t } else { 0 })
}

fn risky_path<S: Scalar>(game: &Game, sigma: &Profile<S>) -> Vec<bool> {
    let mut out = Vec::new();
    let mut h = game.root();
    while !game.history(h).is_terminal() {
        let hist = game.history(h);
        let joint: Vec<usize> = (0..game.players())
            .map(|i| sigma.pure_action(i, 0, h).expect("pure profile"))
            .collect();
        if let Some(m) = mover(game, h) {
            if m > 0 {
                out.push(joint[m] == 1);
            }
        }
        h = hist.children[hist.encode_joint(&joint)];
    }
    out
}

fn finish(risky: Vec<bool>) -> EngineCutoff {
    let cutoff = risky.iter().position(|&r| r).map_or(Cutoff::Never, |k| Cutoff::Player(k + 1));
    EngineCutoff { cutoff, listeners: risky.len(), risky }
}

/// Listener best responses (ties go to `r`) given a value oracle.
fn best_responses<S: Scalar>(game: &Game, base: &Profile<S>, mut values: impl FnMut(usize, HistoryId) -> Vec<S>) -> Profile<S> {
    let mut sigma = base.clone();
    for h in game.non_terminal() {
        if let Some(k) = mover(game, h).filter(|&k| k > 0) {
            let q = values(k, h);
            let a = if q[1].approx_ge(&q[0]) { 1 } else { 0 };
            let row = (0..2).map(|b| if b == a { S::one() } else { S::zero() }).collect();
            sigma.set(k, 0, h, row);
        }
    }
    sigma
}

fn engine_game(alpha: &Rational, n: usize) -> Result<Game, ScenarioError> {
    broadcaster_game(n.min(ENGINE_MAX_LISTENERS), alpha)
}

/// χ-CSE cutoff found by the engine.
pub fn engine_cutoff_cse<S: Scalar>(alpha: &Rational, chi: &S, n: usize) -> Result<EngineCutoff, ScenarioError> {
    let game = engine_game(alpha, n)?;
    let base: Profile<S> = truthful(&game);
    for fam in TrembleFamily::candidates(&game) {
        let cb = consistency_extend(&game, &base, chi, &fam)?;
        let sigma = best_responses(&game, &base, |k, h| {
            action_values_cse(&game, &base, &cb.beliefs, chi, k, 0, h, Continuation::Optimal)
        });
        let opts = CseOptions { families: Some(vec![fam]), interval_search: false, ..CseOptions::default() };
        if check_cse(&game, &sigma, chi, None, &opts)?.equilibrium {
            return Ok(finish(risky_path(&game, &sigma)));
        }
    }
    Err(ScenarioError::NoCandidate("no broadcaster profile passed the CSE check".into()))
}

/// (χ_S, ψ_S)-SCE cutoff found by the engine.
pub fn engine_cutoff_sce<S: Scalar>(alpha: &Rational, chi_s: &S, psi_s: &S, n: usize) -> Result<EngineCutoff, ScenarioError> {
    let game = engine_game(alpha, n)?;
    let w = weights(chi_s, psi_s)?;
    let partition = coarsest_valid_partition(&game, false);
    let base: Profile<S> = truthful(&game);
    for fam in TrembleFamily::candidates(&game) {
        let ctx = SceContext::new(&game, &base, &partition, &fam);
        let sigma = best_responses(&game, &base, |k, h| ctx.action_values(k, 0, h, &w));
        if SceContext::new(&game, &sigma, &partition, &fam).check(chi_s, psi_s)?.equilibrium {
            return Ok(finish(risky_path(&game, &sigma)));
        }
    }
    Err(ScenarioError::NoCandidate("no broadcaster profile passed the SCE check".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn closed_forms() {
        let a = ratio(1, 2);
        assert_eq!(threshold(&a), ratio(2, 3));
        assert_eq!(cutoff_cse(&a, &ratio(7, 10), 2), Cutoff::Player(2));
        assert_eq!(cutoff_cse(&a, &ratio(9, 10), 2), Cutoff::Never);
        assert_eq!(cutoff_cse(&a, &ratio(9, 10), 10), Cutoff::Player(4));
        assert_eq!(cutoff_sce(&a, &ratio(6, 10), &ratio(0, 1)), Cutoff::Player(1));
        assert_eq!(cutoff_sce(&a, &ratio(1, 1), &ratio(0, 1)), Cutoff::Never);
    }

    #[test]
    fn engines_match_closed_forms() {
        let a = ratio(1, 2);
        let e = engine_cutoff_cse(&a, &ratio(7, 10), 2).unwrap();
        assert_eq!(e.cutoff, Cutoff::Player(2));
        assert!(e.monotone());
        assert_eq!(engine_cutoff_cse(&a, &ratio(2, 3), 2).unwrap().cutoff, Cutoff::Player(1));
        assert_eq!(engine_cutoff_sce(&a, &ratio(1, 1), &ratio(0, 1), 2).unwrap().cutoff, Cutoff::Never);
        assert_eq!(engine_cutoff_sce(&a, &ratio(2, 3), &ratio(0, 1), 2).unwrap().cutoff, Cutoff::Player(1));
    }
}
