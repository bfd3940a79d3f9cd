//! Random games and profiles shared by the integration tests.
#![allow(dead_code)]

use cursed::game::{Game, GameBuilder, HistoryId, PASS};
use cursed::profile::Profile;
use cursed::scalar::{int, ratio, Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits for [`random_game`].
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_players: usize,
    pub max_types: usize,
    pub max_horizon: usize,
    /// Cap on joint actions per history.
    pub max_joint: usize,
}

impl Shape {
    pub const SMALL: Shape = Shape { max_players: 3, max_types: 2, max_horizon: 3, max_joint: 4 };

    pub fn one_stage(max_players: usize) -> Shape {
        Shape { max_players, max_types: 2, max_horizon: 1, max_joint: 8 }
    }
}

fn random_prior(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| ratio(x, total)).collect()
}

/// Random game with full-support prior and integer payoffs in `[-3, 3]`.
/// Player 1 always has two actions at the root.
pub fn random_game(seed: u64, shape: Shape) -> Game {
    let mut r = rng(seed);
    let players = r.gen_range(1..=shape.max_players);
    let labels: Vec<Vec<String>> = (0..players)
        .map(|i| (0..r.gen_range(1..=shape.max_types)).map(|t| format!("t{i}{t}")).collect())
        .collect();
    let count: usize = labels.iter().map(Vec::len).product();
    let prior = random_prior(&mut r, count);
    let horizon = r.gen_range(1..=shape.max_horizon);
    let mut budget = 0;
    let mut cur = (usize::MAX, usize::MAX);
    let mut ar = rng(seed ^ 0x5eed);
    let mut pr = rng(seed ^ 0xfeed);
    GameBuilder::new(format!("random_{seed}"), labels, prior, horizon)
        .build(
            |i, view| {
                let key = (view.stage, view.index_in_stage);
                if key != cur {
                    cur = key;
                    budget = shape.max_joint;
                }
                let two = budget >= 2 && (view.stage == 0 && i == 0 || ar.gen_bool(0.6));
                if two {
                    budget /= 2;
                    Ok(vec!["x".to_string(), "y".to_string()])
                } else {
                    Ok(vec![PASS.to_string()])
                }
            },
            |_, _| Ok((0..players).map(|_| int(pr.gen_range(-3..=3))).collect()),
        )
        .expect("random game builds")
}

/// Totally mixed profile with weights in `{1, 2, 3}`.
pub fn random_mixed(game: &Game, seed: u64) -> Profile<Rational> {
    let mut r = rng(seed);
    Profile::from_fn(game, |i, _, h| {
        let k = game.history(h).action_count(i);
        let w: Vec<i64> = (0..k).map(|_| r.gen_range(1..=3)).collect();
        let total: i64 = w.iter().sum();
        w.into_iter().map(|x| ratio(x, total)).collect()
    })
}

pub fn random_pure(game: &Game, seed: u64) -> Profile<Rational> {
    let mut r = rng(seed);
    Profile::pure(game, |i, _, h| r.gen_range(0..game.history(h).action_count(i)))
}

/// Joint probability of reaching `h` under the type profile `k`.
pub fn reach<S: Scalar>(game: &Game, sigma: &Profile<S>, k: usize, h: HistoryId) -> S {
    let mut p = S::one();
    let mut cur = h;
    while let Some(parent) = game.history(cur).parent {
        let joint = game.history(parent).encode_joint(&game.history(cur).last);
        p = p * sigma.joint_prob(game, parent, k, joint);
        cur = parent;
    }
    p
}

/// `μ*(θ_{-i}|θ_i, h)` by direct Bayes over full type profiles.
pub fn bayes<S: Scalar>(game: &Game, sigma: &Profile<S>, i: usize, own: usize, h: HistoryId) -> Option<Vec<S>> {
    let ts = game.types();
    let w: Vec<S> = (0..ts.others_count(i))
        .map(|t| {
            let k = ts.join(i, own, t);
            game.prior::<S>(k) * reach(game, sigma, k, h)
        })
        .collect();
    let total = w.iter().fold(S::zero(), |a, b| a + b.clone());
    if total.is_zero() {
        return None;
    }
    Some(w.into_iter().map(|x| x / total.clone()).collect())
}
