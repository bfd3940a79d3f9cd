//! Perceived decision problems.
//!
//! Both cursed concepts evaluate player `i`'s options at an information set
//! `(θ_i, h)` the same way: a hidden state `s` (carrying an opponent type
//! profile) is drawn from initial weights, opponents then move according to
//! a state-dependent kernel at every later history, and `i` picks actions
//! without observing `s`. Because own actions never change the state
//! weights, the value of any own plan is linear in leaf weights and the best
//! plan is found by backward induction.

use crate::game::{Game, HistoryId};
use crate::profile::Profile;
use crate::scalar::Scalar;

/// How `i` continues after the first move.
pub enum Continuation<'a, S> {
    /// Play `σ_i(θ_i, ·)`.
    Fixed(&'a Profile<S>),
    /// Best own plan in the perceived model.
    Optimal,
}

impl<S> Clone for Continuation<'_, S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for Continuation<'_, S> {}

/// Decision problem of `player` with type `own` starting at `start`.
pub struct Problem<'a> {
    pub game: &'a Game,
    pub player: usize,
    pub own: usize,
    pub start: HistoryId,
}

impl<'a> Problem<'a> {
    /// Per-state reach weight of every terminal history below `start`.
    ///
    /// `init[s] = (weight, θ_{-i} index)`; `kernel(s, h)` is the opponents'
    /// joint distribution at `h` indexed by opponent joint index.
    pub fn leaf_weights<S, K>(&self, init: &[(S, usize)], mut kernel: K) -> Vec<(HistoryId, Vec<S>)>
    where
        S: Scalar,
        K: FnMut(usize, HistoryId) -> Vec<S>,
    {
        let mut out = Vec::new();
        let weights: Vec<S> = init.iter().map(|(w, _)| w.clone()).collect();
        self.forward(self.start, weights, &mut kernel, &mut out);
        out
    }

    fn forward<S, K>(&self, h: HistoryId, weights: Vec<S>, kernel: &mut K, out: &mut Vec<(HistoryId, Vec<S>)>)
    where
        S: Scalar,
        K: FnMut(usize, HistoryId) -> Vec<S>,
    {
        let hist = self.game.history(h);
        if hist.is_terminal() {
            out.push((h, weights));
            return;
        }
        let kernels: Vec<Vec<S>> = (0..weights.len())
            .map(|s| if weights[s].is_zero() { Vec::new() } else { kernel(s, h) })
            .collect();
        for (joint, &child) in hist.children.iter().enumerate() {
            let o = hist.others_of_joint(self.player, joint);
            let next: Vec<S> = weights
                .iter()
                .zip(&kernels)
                .map(|(w, k)| if w.is_zero() { S::zero() } else { w.clone() * k[o].clone() })
                .collect();
            self.forward(child, next, kernel, out);
        }
    }

    /// Weighted payoff of each leaf: `Σ_s R_s(leaf)·u_i(θ(s), leaf)`.
    pub fn leaf_values<S: Scalar>(&self, init: &[(S, usize)], leaves: &[(HistoryId, Vec<S>)]) -> Vec<S> {
        let ts = self.game.types();
        let profiles: Vec<usize> = init.iter().map(|(_, o)| ts.join(self.player, self.own, *o)).collect();
        leaves
            .iter()
            .map(|(h, r)| {
                r.iter().zip(&profiles).fold(S::zero(), |acc, (w, &k)| {
                    if w.is_zero() {
                        acc
                    } else {
                        acc + w.clone() * self.game.payoff::<S>(*h, k, self.player)
                    }
                })
            })
            .collect()
    }

    /// Value of each own action at `start`, given leaf values listed in the
    /// order produced by [`Problem::leaf_weights`].
    pub fn action_values<S: Scalar>(&self, leaf_values: &[S], cont: Continuation<S>) -> Vec<S> {
        let hist = self.game.history(self.start);
        let n_own = hist.action_count(self.player);
        let mut per_action = vec![S::zero(); n_own];
        let mut cursor = 0;
        for (joint, &child) in hist.children.iter().enumerate() {
            let a = hist.decode_joint(joint)[self.player];
            let v = self.backward(child, leaf_values, &mut cursor, cont);
            per_action[a] = per_action[a].clone() + v;
        }
        per_action
    }

    fn backward<S: Scalar>(&self, h: HistoryId, leaves: &[S], cursor: &mut usize, cont: Continuation<S>) -> S {
        let hist = self.game.history(h);
        if hist.is_terminal() {
            let v = leaves[*cursor].clone();
            *cursor += 1;
            return v;
        }
        let n_own = hist.action_count(self.player);
        let mut per_action = vec![S::zero(); n_own];
        for (joint, &child) in hist.children.iter().enumerate() {
            let a = hist.decode_joint(joint)[self.player];
            let v = self.backward(child, leaves, cursor, cont);
            per_action[a] = per_action[a].clone() + v;
        }
        match cont {
            Continuation::Fixed(sigma) => sigma
                .dist(self.player, self.own, h)
                .iter()
                .zip(per_action)
                .fold(S::zero(), |acc, (p, v)| if p.is_zero() { acc } else { acc + p.clone() * v }),
            Continuation::Optimal => per_action
                .into_iter()
                .reduce(|a, b| if b > a { b } else { a })
                .expect("non-empty action set"),
        }
    }

    /// Best value over every pure own plan below `start` by enumeration.
    /// Exponential; meant for cross-checking backward induction on small
    /// trees.
    pub fn exhaustive_best<S: Scalar>(&self, leaf_values: &[S]) -> S {
        let own_nodes: Vec<HistoryId> = self
            .game
            .non_terminal()
            .filter(|&h| self.game.precedes_eq(self.start, h))
            .collect();
        let sizes: Vec<usize> = own_nodes.iter().map(|&h| self.game.history(h).action_count(self.player)).collect();
        let total: usize = sizes.iter().product();
        let leaf_ids: Vec<HistoryId> = self
            .game
            .terminals()
            .iter()
            .copied()
            .filter(|&t| self.game.precedes_eq(self.start, t))
            .collect();
        let mut best: Option<S> = None;
        for plan in 0..total {
            let mut choice = vec![0; own_nodes.len()];
            let mut rest = plan;
            for k in (0..own_nodes.len()).rev() {
                choice[k] = rest % sizes[k];
                rest /= sizes[k];
            }
            let mut v = S::zero();
            for (li, &leaf) in leaf_ids.iter().enumerate() {
                let path = self.game.path(leaf);
                let consistent = own_nodes.iter().zip(&choice).all(|(&h, &c)| {
                    let st = self.game.history(h).stage;
                    !self.game.precedes_eq(h, leaf) || path[st][self.player] == c
                });
                if consistent {
                    v = v + leaf_values[li].clone();
                }
            }
            best = Some(match best {
                Some(b) if b >= v => b,
                _ => v,
            });
        }
        best.expect("at least one plan")
    }
}

/// `max Q − min_{a ∈ supp} Q(a)`; non-positive up to tolerance iff the
/// support consists of maximizers.
pub fn support_slack<S: Scalar>(q: &[S], dist: &[S]) -> S {
    let best = q.iter().cloned().reduce(|a, b| if b > a { b } else { a }).expect("non-empty");
    q.iter()
        .zip(dist)
        .filter(|(_, p)| !p.is_zero())
        .map(|(v, _)| best.clone() - v.clone())
        .reduce(|a, b| if b > a { b } else { a })
        .unwrap_or_else(S::zero)
}
