//! Tremble families: directions along which a profile is perturbed to a
//! totally mixed one.
//!
//! An action outside the support of `σ_i(θ_i,h)` gets probability
//! `c·ε^k`, with `(c, k)` chosen by the family. Orders differing across
//! types make the limiting posterior after an unexpected action concentrate
//! on the types that tremble at the lowest order.

use crate::game::{Game, HistoryId};
use crate::lead::Lead;
use crate::profile::Profile;
use crate::scalar::{format_rational, Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum TrembleFamily {
    /// Every unplayed action trembles at rate `ε/|A_i(h)|`.
    Uniform,
    /// Per player, the listed type trembles at order 1 and every other type
    /// at order 2.
    FavoredTypes(Vec<usize>),
    /// Per player and type, a coefficient and order.
    Custom(Vec<Vec<(Rational, i32)>>),
}

const MAX_FAVORED_COMBINATIONS: usize = 64;

impl TrembleFamily {
    /// `(coefficient, order)` of an unplayed action.
    pub fn rate<S: Scalar>(&self, player: usize, own: usize, actions: usize) -> (S, i32) {
        let share = S::from_ratio(1, actions as i64);
        match self {
            TrembleFamily::Uniform => (share, 1),
            TrembleFamily::FavoredTypes(fav) => {
                (share, if fav.get(player).copied().unwrap_or(0) == own { 1 } else { 2 })
            }
            TrembleFamily::Custom(rates) => {
                let (c, k) = &rates[player][own];
                (S::from_rational(c), *k)
            }
        }
    }

    pub fn describe(&self, game: &Game) -> String {
        match self {
            TrembleFamily::Uniform => "uniform".into(),
            TrembleFamily::FavoredTypes(fav) => {
                let parts: Vec<String> = fav
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| game.types().count_of(*i) > 1)
                    .map(|(i, &t)| format!("{}:{}", i + 1, game.types().label(i, t)))
                    .collect();
                format!("favored({})", parts.join(","))
            }
            TrembleFamily::Custom(rates) => {
                let parts: Vec<String> = rates
                    .iter()
                    .enumerate()
                    .flat_map(|(i, r)| {
                        r.iter().enumerate().map(move |(t, (c, k))| {
                            format!("{}:{}={}e{}", i + 1, t, format_rational(c), k)
                        })
                    })
                    .collect();
                format!("custom({})", parts.join(","))
            }
        }
    }

    /// Uniform trembles followed by every favored-type combination over
    /// players with several types.
    pub fn candidates(game: &Game) -> Vec<TrembleFamily> {
        let mut out = vec![TrembleFamily::Uniform];
        let counts: Vec<usize> = (0..game.players()).map(|i| game.types().count_of(i)).collect();
        if counts.iter().all(|&c| c == 1) {
            return out;
        }
        let total: usize = counts.iter().product();
        for k in 0..total.min(MAX_FAVORED_COMBINATIONS) {
            let mut fav = vec![0; counts.len()];
            let mut rest = k;
            for i in (0..counts.len()).rev() {
                fav[i] = rest % counts[i];
                rest /= counts[i];
            }
            out.push(TrembleFamily::FavoredTypes(fav));
        }
        out
    }
}

/// A profile perturbed along a tremble family, kept as leading terms.
#[derive(Debug, Clone)]
pub struct LeadProfile<S> {
    probs: Vec<Vec<Vec<Vec<Lead<S>>>>>,
}

impl<S: Scalar> LeadProfile<S> {
    pub fn new(game: &Game, sigma: &Profile<S>, family: &TrembleFamily) -> Self {
        let probs = (0..game.players())
            .map(|i| {
                (0..game.types().count_of(i))
                    .map(|t| {
                        game.non_terminal()
                            .map(|h| {
                                let d = sigma.dist(i, t, h);
                                let (c, k) = family.rate::<S>(i, t, d.len());
                                d.iter()
                                    .map(|p| {
                                        if *p > S::zero() {
                                            Lead::constant(p.clone())
                                        } else {
                                            Lead::term(c.clone(), k)
                                        }
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        LeadProfile { probs }
    }

    pub fn get(&self, player: usize, own: usize, h: HistoryId, action: usize) -> &Lead<S> {
        &self.probs[player][own][h][action]
    }

    pub fn dist(&self, player: usize, own: usize, h: HistoryId) -> &[Lead<S>] {
        &self.probs[player][own][h]
    }

    /// Numeric perturbed profile at a concrete `ε`, renormalized.
    pub fn eval(&self, game: &Game, eps: f64) -> Profile<f64> {
        Profile::from_fn(game, |i, t, h| {
            let raw: Vec<f64> = self.probs[i][t][h].iter().map(|x| x.eval(eps)).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|x| x / total).collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_game, SIGNALING_FIXTURE};

    #[test]
    fn signaling_has_three_candidates() {
        let g = parse_game(SIGNALING_FIXTURE).unwrap();
        let c = TrembleFamily::candidates(&g);
        assert_eq!(c.len(), 3);
        assert_eq!(c[1].describe(&g), "favored(1:t1)");
    }

    #[test]
    fn unplayed_actions_get_leading_terms() {
        let g = parse_game(SIGNALING_FIXTURE).unwrap();
        let sigma: Profile<Rational> = Profile::pure(&g, |_, _, _| 1);
        let lp = LeadProfile::new(&g, &sigma, &TrembleFamily::FavoredTypes(vec![0, 0]));
        assert_eq!(lp.get(0, 0, 0, 0).order(), Some(1));
        assert_eq!(lp.get(0, 1, 0, 0).order(), Some(2));
        assert_eq!(lp.get(0, 1, 0, 1).order(), Some(0));
        let num = lp.eval(&g, 1e-3);
        assert!((num.prob(0, 0, 0, 0) - 0.5e-3 / (1.0 + 0.5e-3)).abs() < 1e-15);
    }
}
