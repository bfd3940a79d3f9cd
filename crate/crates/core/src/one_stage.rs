//! One-stage games: cursed equilibrium with a cursedness parameter and
//! independently cursed equilibrium.

use rayon::prelude::*;

use crate::error::SolveError;
use crate::game::Game;
use crate::profile::{Profile, PureSpace, MAX_PURE_PROFILES};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Concept<S> {
    /// Cursed equilibrium with parameter `χ`.
    Ce(S),
    /// Independently cursed equilibrium.
    Ice,
}

/// Objective values of every action of one `(i, θ_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveRow<S> {
    pub player: usize,
    pub own: usize,
    pub values: Vec<S>,
    /// Actions attaining the maximum.
    pub argmax: Vec<usize>,
    /// Whether every action in the support is a maximizer.
    pub best_response: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneStageVerdict<S> {
    pub equilibrium: bool,
    pub worst_slack: S,
    pub rows: Vec<ObjectiveRow<S>>,
}

impl<S> OneStageVerdict<S> {
    /// Rows where several actions tie for the maximum.
    pub fn ties(&self) -> impl Iterator<Item = &ObjectiveRow<S>> {
        self.rows.iter().filter(|r| r.argmax.len() > 1)
    }
}

fn require_one_stage(game: &Game) -> Result<(), SolveError> {
    if game.horizon() == 1 {
        Ok(())
    } else {
        Err(SolveError::NotOneStage(game.horizon()))
    }
}

fn objective<S: Scalar>(
    game: &Game,
    i: usize,
    own: usize,
    action: usize,
    kernel: impl Fn(usize, usize) -> S,
) -> S {
    let ts = game.types();
    let root = game.root();
    let hist = game.history(root);
    let f = game.conditional_prior::<S>(i, own);
    let mut total = S::zero();
    for (t, ft) in f.iter().enumerate() {
        let prof = ts.join(i, own, t);
        for o in 0..hist.others_joint_count(i) {
            let p = kernel(t, o);
            if p.is_zero() {
                continue;
            }
            let leaf = hist.children[hist.join_actions(i, action, o)];
            total = total + ft.clone() * p * game.payoff::<S>(leaf, prof, i);
        }
    }
    total
}

/// `Σ_{θ_{-i}} F(θ_{-i}|θ_i) Σ_{a_{-i}} [χσ̄_{-i}(a_{-i}) + (1−χ)σ_{-i}(a_{-i}|θ_{-i})] u_i`.
pub fn ce_objective<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    i: usize,
    own: usize,
    action: usize,
    chi: &S,
) -> Result<S, SolveError> {
    require_one_stage(game)?;
    let ts = game.types();
    let root = game.root();
    let m = game.history(root).others_joint_count(i);
    let f = game.conditional_prior::<S>(i, own);
    let own_kernel: Vec<Vec<S>> = (0..f.len())
        .map(|t| (0..m).map(|o| sigma.others_prob(game, i, root, ts.join(i, own, t), o)).collect())
        .collect();
    let avg: Vec<S> = (0..m)
        .map(|o| f.iter().zip(&own_kernel).fold(S::zero(), |acc, (w, k)| acc + w.clone() * k[o].clone()))
        .collect();
    let keep = S::one() - chi.clone();
    Ok(objective(game, i, own, action, |t, o| {
        chi.clone() * avg[o].clone() + keep.clone() * own_kernel[t][o].clone()
    }))
}

/// `Σ_{θ_{-i}} F(θ_{-i}|θ_i) Σ_{a_{-i}} Π_{j≠i} σ̄_j(a_j) u_i` with
/// `σ̄_j(a_j) = Σ_{θ_j} F(θ_j|θ_i) σ_j(a_j|θ_j)`.
pub fn ice_objective<S: Scalar>(game: &Game, sigma: &Profile<S>, i: usize, own: usize, action: usize) -> Result<S, SolveError> {
    require_one_stage(game)?;
    let ts = game.types();
    let root = game.root();
    let hist = game.history(root);
    let f = game.conditional_prior::<S>(i, own);
    let marginals: Vec<Vec<S>> = (0..game.players())
        .map(|j| {
            if j == i {
                return Vec::new();
            }
            (0..hist.action_count(j))
                .map(|a| {
                    f.iter().enumerate().fold(S::zero(), |acc, (t, w)| {
                        let tj = ts.type_of(ts.join(i, own, t), j);
                        acc + w.clone() * sigma.prob(j, tj, root, a).clone()
                    })
                })
                .collect()
        })
        .collect();
    let product: Vec<S> = (0..hist.others_joint_count(i))
        .map(|o| {
            let a = hist.decode_others(i, o);
            (0..game.players())
                .filter(|&j| j != i)
                .fold(S::one(), |acc, j| acc * marginals[j][a[j]].clone())
        })
        .collect();
    Ok(objective(game, i, own, action, |_, o| product[o].clone()))
}

/// Best-response check of `σ` under a concept.
pub fn check_one_stage<S: Scalar>(game: &Game, sigma: &Profile<S>, concept: &Concept<S>) -> Result<OneStageVerdict<S>, SolveError> {
    require_one_stage(game)?;
    sigma.validate(game)?;
    let root = game.root();
    let mut rows = Vec::new();
    let mut worst = S::zero();
    for i in 0..game.players() {
        for own in 0..game.types().count_of(i) {
            let n = game.history(root).action_count(i);
            let values = (0..n)
                .map(|a| match concept {
                    Concept::Ce(chi) => ce_objective(game, sigma, i, own, a, chi),
                    Concept::Ice => ice_objective(game, sigma, i, own, a),
                })
                .collect::<Result<Vec<S>, _>>()?;
            let best = values.iter().cloned().reduce(|a, b| if b > a { b } else { a }).expect("non-empty");
            let argmax: Vec<usize> = (0..n).filter(|&a| (best.clone() - values[a].clone()) <= S::tolerance()).collect();
            let slack = crate::perceived::support_slack(&values, sigma.dist(i, own, root));
            if slack > worst {
                worst = slack.clone();
            }
            rows.push(ObjectiveRow { player: i, own, values, argmax, best_response: slack <= S::tolerance() });
        }
    }
    Ok(OneStageVerdict { equilibrium: rows.iter().all(|r| r.best_response), worst_slack: worst, rows })
}

pub fn check_ce<S: Scalar>(game: &Game, sigma: &Profile<S>, chi: &S) -> Result<OneStageVerdict<S>, SolveError> {
    if *chi < S::zero() || *chi > S::one() {
        return Err(SolveError::InvalidParameter(format!("chi must lie in [0,1], got {chi}")));
    }
    check_one_stage(game, sigma, &Concept::Ce(chi.clone()))
}

pub fn check_ice<S: Scalar>(game: &Game, sigma: &Profile<S>) -> Result<OneStageVerdict<S>, SolveError> {
    check_one_stage(game, sigma, &Concept::Ice)
}

/// Every pure equilibrium of the concept, in enumeration order.
pub fn enumerate_pure<S: Scalar>(game: &Game, concept: &Concept<S>) -> Result<Vec<Profile<S>>, SolveError> {
    require_one_stage(game)?;
    let space = PureSpace::new(game);
    let total = space.guard(MAX_PURE_PROFILES).map_err(SolveError::CombinatorialLimitExceeded)?;
    let found: Result<Vec<Option<Profile<S>>>, SolveError> = (0..total)
        .into_par_iter()
        .map(|k| {
            let sigma: Profile<S> = space.nth(game, k);
            Ok(check_one_stage(game, &sigma, concept)?.equilibrium.then_some(sigma))
        })
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameBuilder;
    use crate::scalar::{int, ratio, Rational};

    /// Two players, player 1 has two equally likely types and wants to match
    /// player 2 only when its type is high.
    fn game() -> Game {
        GameBuilder::new(
            "toy",
            vec![vec!["lo".into(), "hi".into()], vec!["-".into()]],
            vec![ratio(1, 2), ratio(1, 2)],
            1,
        )
        .build(
            |_, _| Ok(vec!["x".into(), "y".into()]),
            |types, v| {
                let a = &v.path[0];
                let same = a[0] == a[1];
                let u1 = if types[0] == 1 { same } else { !same };
                Ok(vec![int(u1 as i64), int((a[1] == "x") as i64)])
            },
        )
        .unwrap()
    }

    #[test]
    fn chi_zero_is_bayesian_and_one_averages() {
        let g = game();
        let sigma: Profile<Rational> = Profile::pure(&g, |i, t, _| if i == 0 { t } else { 0 });
        // Player 2 faces lo->x, hi->y; x pays 1 regardless.
        assert_eq!(ce_objective(&g, &sigma, 1, 0, 0, &ratio(0, 1)).unwrap(), int(1));
        assert_eq!(ce_objective(&g, &sigma, 0, 1, 0, &ratio(1, 1)).unwrap(), int(1));
        assert_eq!(
            ce_objective(&g, &sigma, 0, 1, 0, &ratio(1, 2)).unwrap(),
            ice_objective(&g, &sigma, 0, 1, 0).unwrap()
        );
    }

    #[test]
    fn enumeration_agrees_with_checks() {
        let g = game();
        let eq = enumerate_pure(&g, &Concept::Ce(ratio(1, 2))).unwrap();
        assert!(!eq.is_empty());
        for s in &eq {
            assert!(check_ce(&g, s, &ratio(1, 2)).unwrap().equilibrium);
        }
        assert_eq!(PureSpace::new(&g).total(), 8);
    }
}
