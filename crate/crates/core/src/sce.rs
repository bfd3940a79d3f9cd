//! Sequential cursed equilibrium.
//!
//! At an information set `I_i = (θ_i, h)`, player `i` mixes three
//! conjectures about opponents and nature with weights
//! `(χ_Sψ_S, χ_S(1−ψ_S), 1−χ_S)`:
//!
//! * sequentially cursed: opponents play the average of their strategy over
//!   the partition cell, restricted to nodes compatible with `I_i`;
//! * typically cursed: the same average over every node of the cell that
//!   is compatible with `θ_i`;
//! * Bayesian: the true strategies.
//!
//! Off-path conditioning is resolved by tremble limits in leading-order
//! arithmetic. Everything that does not depend on `(χ_S, ψ_S)` is kept in
//! an [`SceContext`], so parameter grids only repeat a backward pass.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::cse::{Verdict, Violation};
use crate::error::SolveError;
use crate::game::{Game, HistoryId};
use crate::lead::Lead;
use crate::partition::{coarsest_valid_partition, Partition};
use crate::perceived::{support_slack, Continuation, Problem};
use crate::profile::{BeliefSystem, Profile};
use crate::scalar::Scalar;
use crate::tremble::{LeadProfile, TrembleFamily};

/// Conjecture weights `(χ_Sψ_S, χ_S(1−ψ_S), 1−χ_S)`.
pub fn weights<S: Scalar>(chi_s: &S, psi_s: &S) -> Result<[S; 3], SolveError> {
    for (name, v) in [("chi_s", chi_s), ("psi_s", psi_s)] {
        if *v < S::zero() || *v > S::one() {
            return Err(SolveError::InvalidParameter(format!("{name} must lie in [0,1], got {v}")));
        }
    }
    Ok([
        chi_s.clone() * psi_s.clone(),
        chi_s.clone() * (S::one() - psi_s.clone()),
        S::one() - chi_s.clone(),
    ])
}

/// The three conjectures about one opponent at one history.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureRow<S> {
    pub player: usize,
    pub history: HistoryId,
    /// Sequentially cursed; does not depend on the opponent's type.
    pub sequential: Vec<S>,
    /// Typically cursed; does not depend on the opponent's type.
    pub typical: Vec<S>,
    /// Bayesian, per opponent type.
    pub bayesian: Vec<Vec<S>>,
}

/// Conjectures at an information set of `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureSet<S> {
    /// Nature conjectures over `Θ_{-i}`: sequential, typical, Bayesian.
    pub nature: [Vec<S>; 3],
    /// Rows for every strict ancestor and every descendant (inclusive).
    pub opponents: Vec<ConjectureRow<S>>,
}

struct InfoData<S> {
    /// Posterior over `Θ_{-i}` under each conjecture.
    posteriors: [Vec<S>; 3],
    /// Per leaf below `h` (tree order), the payoff-weighted reach under
    /// each conjecture.
    leaves: Vec<[S; 3]>,
}

/// Typical averages keyed by `(player, own type, opponent, opponent cell)`.
type TypicalCache<S> = Mutex<HashMap<(usize, usize, usize, usize), Vec<S>>>;

/// Profile- and family-dependent data shared by every `(χ_S, ψ_S)`.
pub struct SceContext<'a, S> {
    game: &'a Game,
    sigma: &'a Profile<S>,
    partition: &'a Partition,
    family: TrembleFamily,
    lp: LeadProfile<S>,
    /// `[h][θ]` leading term of the probability of reaching `h` with `θ`.
    reach: Vec<Vec<Lead<S>>>,
    typical: TypicalCache<S>,
    info: Vec<Vec<Vec<Option<InfoData<S>>>>>,
}

impl<'a, S: Scalar> SceContext<'a, S> {
    pub fn new(game: &'a Game, sigma: &'a Profile<S>, partition: &'a Partition, family: &TrembleFamily) -> Self {
        let lp = LeadProfile::new(game, sigma, family);
        let ts = game.types();
        let mut reach: Vec<Vec<Lead<S>>> = Vec::with_capacity(game.non_terminal().end);
        for h in game.non_terminal() {
            let row = match game.history(h).parent {
                None => (0..ts.count()).map(|k| Lead::constant(game.prior::<S>(k))).collect(),
                Some(p) => {
                    let last = &game.history(h).last;
                    (0..ts.count())
                        .map(|k| {
                            let types = ts.decode(k);
                            last.iter().enumerate().fold(reach[p][k].clone(), |acc, (j, &a)| {
                                acc * lp.get(j, types[j], p, a).clone()
                            })
                        })
                        .collect()
                }
            };
            reach.push(row);
        }
        let mut ctx = SceContext {
            game,
            sigma,
            partition,
            family: family.clone(),
            lp,
            reach,
            typical: Mutex::new(HashMap::new()),
            info: Vec::new(),
        };
        ctx.info = (0..game.players())
            .map(|i| {
                (0..ts.count_of(i))
                    .map(|own| game.non_terminal().map(|h| Some(ctx.info_data(i, own, h))).collect())
                    .collect()
            })
            .collect();
        ctx
    }

    pub fn family(&self) -> &TrembleFamily {
        &self.family
    }

    pub fn partition(&self) -> &Partition {
        self.partition
    }

    /// Cell average of `j`'s strategy, over nodes compatible with `θ_i` and,
    /// when `below` is given, descending from it.
    fn cell_average(&self, i: usize, own: usize, j: usize, h: HistoryId, below: Option<HistoryId>) -> Vec<S> {
        let ts = self.game.types();
        let cell = self.partition.cell_of(j, h);
        let k = self.game.history(h).action_count(j);
        let mut num = vec![Lead::Zero; k];
        for &x in self.partition.members(j, cell) {
            if below.is_some_and(|b| !self.game.precedes_eq(b, x)) {
                continue;
            }
            for t in 0..ts.others_count(i) {
                let prof = ts.join(i, own, t);
                let tj = ts.type_of(prof, j);
                for (a, n) in num.iter_mut().enumerate() {
                    *n = n.clone() + self.reach[x][prof].clone() * self.lp.get(j, tj, x, a).clone();
                }
            }
        }
        Lead::normalized_limit(&num).expect("trembles reach every node")
    }

    fn typical_average(&self, i: usize, own: usize, j: usize, h: HistoryId) -> Vec<S> {
        let key = (i, own, j, self.partition.cell_of(j, h));
        if let Some(v) = self.typical.lock().expect("cache lock").get(&key) {
            return v.clone();
        }
        let v = self.cell_average(i, own, j, h, None);
        self.typical.lock().expect("cache lock").insert(key, v.clone());
        v
    }

    /// Bayesian posterior `μ*(θ_{-i} | θ_i, h)`.
    pub fn bayes_posterior(&self, i: usize, own: usize, h: HistoryId) -> Vec<S> {
        let ts = self.game.types();
        let w: Vec<Lead<S>> = (0..ts.others_count(i)).map(|t| self.reach[h][ts.join(i, own, t)].clone()).collect();
        Lead::normalized_limit(&w).expect("trembles reach every node")
    }

    fn posteriors(&self, i: usize, own: usize, h: HistoryId) -> [Vec<S>; 3] {
        let star = self.bayes_posterior(i, own, h);
        // The typically cursed view of past moves does not depend on
        // opponents' types, so it leaves the prior unchanged.
        let prior = self.game.conditional_prior::<S>(i, own);
        [star.clone(), prior, star]
    }

    /// Joint opponent distribution at `x` under a type-free conjecture.
    fn product_kernel(&self, i: usize, x: HistoryId, per_player: &[Vec<S>]) -> Vec<S> {
        let hist = self.game.history(x);
        (0..hist.others_joint_count(i))
            .map(|o| {
                let a = hist.decode_others(i, o);
                (0..self.game.players())
                    .filter(|&j| j != i)
                    .fold(S::one(), |acc, j| acc * per_player[j][a[j]].clone())
            })
            .collect()
    }

    fn info_data(&self, i: usize, own: usize, h: HistoryId) -> InfoData<S> {
        let posteriors = self.posteriors(i, own, h);
        if self.game.history(h).action_count(i) < 2 {
            return InfoData { posteriors, leaves: Vec::new() };
        }
        let game = self.game;
        let ts = game.types();
        let m = ts.others_count(i);
        let init: Vec<(S, usize)> = (0..3).flat_map(|k| (0..m).map(move |t| (k, t))).map(|(k, t)| (posteriors[k][t].clone(), t)).collect();
        let problem = Problem { game, player: i, own, start: h };
        let mut cursed: HashMap<(usize, HistoryId), Vec<S>> = HashMap::new();
        let leaves = problem.leaf_weights(&init, |s, x| {
            let (k, t) = (s / m, s % m);
            if k == 2 {
                let prof = ts.join(i, own, t);
                let hist = game.history(x);
                return (0..hist.others_joint_count(i))
                    .map(|o| self.sigma.others_prob(game, i, x, prof, o))
                    .collect();
            }
            cursed
                .entry((k, x))
                .or_insert_with(|| {
                    let per: Vec<Vec<S>> = (0..game.players())
                        .map(|j| {
                            if j == i {
                                Vec::new()
                            } else if k == 0 {
                                self.cell_average(i, own, j, x, Some(h))
                            } else {
                                self.typical_average(i, own, j, x)
                            }
                        })
                        .collect();
                    self.product_kernel(i, x, &per)
                })
                .clone()
        });
        let leaves = leaves
            .into_iter()
            .map(|(leaf, r)| {
                let mut out = [S::zero(), S::zero(), S::zero()];
                for (k, slot) in out.iter_mut().enumerate() {
                    for t in 0..m {
                        let w = &r[k * m + t];
                        if !w.is_zero() {
                            *slot = slot.clone() + w.clone() * game.payoff::<S>(leaf, ts.join(i, own, t), i);
                        }
                    }
                }
                out
            })
            .collect();
        InfoData { posteriors, leaves }
    }

    /// All conjectures at `(θ_i, h)`.
    pub fn conjectures(&self, i: usize, own: usize, h: HistoryId) -> ConjectureSet<S> {
        let game = self.game;
        let ts = game.types();
        let mut opponents = Vec::new();
        for x in game.non_terminal() {
            let past = game.precedes_eq(x, h) && x != h;
            let future = game.precedes_eq(h, x);
            if !past && !future {
                continue;
            }
            for j in (0..game.players()).filter(|&j| j != i) {
                let typical = self.typical_average(i, own, j, x);
                let (sequential, bayesian) = if past {
                    let next = game.ancestor(h, game.history(x).stage + 1);
                    let a = game.history(next).last[j];
                    let k = game.history(x).action_count(j);
                    let point: Vec<S> = (0..k).map(|b| if b == a { S::one() } else { S::zero() }).collect();
                    (point.clone(), vec![point; ts.count_of(j)])
                } else {
                    let seq = self.cell_average(i, own, j, x, Some(h));
                    let bay = (0..ts.count_of(j)).map(|tj| self.sigma.dist(j, tj, x).to_vec()).collect();
                    (seq, bay)
                };
                opponents.push(ConjectureRow { player: j, history: x, sequential, typical, bayesian });
            }
        }
        ConjectureSet { nature: self.posteriors(i, own, h), opponents }
    }

    /// Mixture belief over `Θ_{-i}` at `(θ_i, h)`.
    pub fn belief(&self, i: usize, own: usize, h: HistoryId, w: &[S; 3]) -> Vec<S> {
        let post = &self.info[i][own][h].as_ref().expect("prepared").posteriors;
        (0..post[0].len())
            .map(|t| (0..3).fold(S::zero(), |acc, k| acc + w[k].clone() * post[k][t].clone()))
            .collect()
    }

    fn leaf_values(&self, i: usize, own: usize, h: HistoryId, w: &[S; 3]) -> Vec<S> {
        self.info[i][own][h]
            .as_ref()
            .expect("prepared")
            .leaves
            .iter()
            .map(|l| (0..3).fold(S::zero(), |acc, k| acc + w[k].clone() * l[k].clone()))
            .collect()
    }

    /// Value of each own first move at `(θ_i, h)` with an optimal own
    /// continuation.
    pub fn action_values(&self, i: usize, own: usize, h: HistoryId, w: &[S; 3]) -> Vec<S> {
        let values = self.leaf_values(i, own, h, w);
        Problem { game: self.game, player: i, own, start: h }.action_values(&values, Continuation::Optimal)
    }

    /// Perceived expected payoff when `i` follows `partial` from `h` on.
    pub fn expected_payoff(&self, i: usize, own: usize, h: HistoryId, partial: &Profile<S>, w: &[S; 3]) -> S {
        let values = self.leaf_values(i, own, h, w);
        let q = Problem { game: self.game, player: i, own, start: h }.action_values(&values, Continuation::Fixed(partial));
        partial.dist(i, own, h).iter().zip(q).fold(S::zero(), |acc, (p, v)| acc + p.clone() * v)
    }

    /// Best perceived value at `(θ_i, h)` by enumerating pure plans.
    pub fn exhaustive_best(&self, i: usize, own: usize, h: HistoryId, w: &[S; 3]) -> S {
        let values = self.leaf_values(i, own, h, w);
        Problem { game: self.game, player: i, own, start: h }.exhaustive_best(&values)
    }

    /// Best-response check at every information set.
    pub fn check(&self, chi_s: &S, psi_s: &S) -> Result<Verdict<S>, SolveError> {
        let w = weights(chi_s, psi_s)?;
        let game = self.game;
        let mut worst = S::zero();
        let mut violations = Vec::new();
        let mut beliefs = BeliefSystem::prior(game);
        for i in 0..game.players() {
            for own in 0..game.types().count_of(i) {
                for h in game.non_terminal() {
                    beliefs.set(i, own, h, self.belief(i, own, h, &w));
                    if game.history(h).action_count(i) < 2 {
                        continue;
                    }
                    let q = self.action_values(i, own, h, &w);
                    let slack = support_slack(&q, self.sigma.dist(i, own, h));
                    if slack > worst {
                        worst = slack.clone();
                    }
                    if slack > S::tolerance() {
                        violations.push(Violation { player: i, own, history: h, slack, values: q });
                    }
                }
            }
        }
        Ok(Verdict {
            equilibrium: violations.is_empty(),
            worst_slack: worst,
            violations,
            beliefs,
            family: Some(self.family.clone()),
            notes: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct SceOptions {
    /// Tremble families tried in order; `None` means all candidates.
    pub families: Option<Vec<TrembleFamily>>,
    /// Split partition cells per public history.
    pub force_phc: bool,
}

#[derive(Debug, Clone)]
pub struct SceVerdict<S> {
    pub verdict: Verdict<S>,
    pub partition_phc: bool,
    pub forced_phc: bool,
}

/// `(χ_S, ψ_S)`-SCE check: an equilibrium iff some candidate tremble family
/// supports every information set.
pub fn check_sce<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    chi_s: &S,
    psi_s: &S,
    opts: &SceOptions,
) -> Result<SceVerdict<S>, SolveError> {
    weights(chi_s, psi_s)?;
    sigma.validate(game)?;
    let partition = coarsest_valid_partition(game, opts.force_phc);
    let natural_phc = if opts.force_phc { coarsest_valid_partition(game, false).phc() } else { partition.phc() };
    let families = opts.families.clone().unwrap_or_else(|| TrembleFamily::candidates(game));
    let mut best: Option<Verdict<S>> = None;
    for fam in &families {
        let ctx = SceContext::new(game, sigma, &partition, fam);
        let v = ctx.check(chi_s, psi_s)?;
        if v.equilibrium {
            best = Some(v);
            break;
        }
        if best.as_ref().is_none_or(|b| v.worst_slack < b.worst_slack) {
            best = Some(v);
        }
    }
    Ok(SceVerdict {
        verdict: best.expect("at least one tremble family"),
        partition_phc: natural_phc,
        forced_phc: opts.force_phc,
    })
}

/// Contexts for every candidate family, for repeated checks over a grid.
pub fn contexts<'a, S: Scalar>(
    game: &'a Game,
    sigma: &'a Profile<S>,
    partition: &'a Partition,
) -> Vec<SceContext<'a, S>> {
    TrembleFamily::candidates(game)
        .iter()
        .map(|f| SceContext::new(game, sigma, partition, f))
        .collect()
}

/// Verdict over a set of family contexts at one grid point.
pub fn holds<S: Scalar>(ctxs: &[SceContext<'_, S>], chi_s: &S, psi_s: &S) -> Result<bool, SolveError> {
    for c in ctxs {
        if c.check(chi_s, psi_s)?.equilibrium {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_game, SIGNALING_FIXTURE};
    use crate::profile::parse_shorthand;
    use crate::scalar::{ratio, Rational};

    fn verdict(text: &str, chi: Rational, psi: Rational) -> bool {
        let g = parse_game(SIGNALING_FIXTURE).unwrap();
        let s = parse_shorthand(&g, text).unwrap();
        check_sce(&g, &s, &chi, &psi, &SceOptions::default()).unwrap().verdict.equilibrium
    }

    #[test]
    fn separating_profile_only_at_one_third() {
        assert!(verdict("[(B,A);(L,R)]", ratio(1, 3), ratio(1, 2)));
        assert!(!verdict("[(B,A);(L,R)]", ratio(1, 4), ratio(1, 2)));
        assert!(!verdict("[(B,A);(L,R)]", ratio(1, 2), ratio(1, 2)));
    }

    #[test]
    fn pooling_thresholds() {
        assert!(verdict("[(A,A);(L,R)]", ratio(1, 3), ratio(0, 1)));
        assert!(!verdict("[(A,A);(L,R)]", ratio(34, 100), ratio(0, 1)));
        assert!(verdict("[(B,B);(L,R)]", ratio(1, 3), ratio(1, 1)));
        assert!(!verdict("[(B,B);(L,R)]", ratio(32, 100), ratio(1, 1)));
        assert!(verdict("[(B,B);(R,R)]", ratio(8, 9), ratio(0, 1)));
        assert!(!verdict("[(B,B);(R,R)]", ratio(9, 10), ratio(0, 1)));
    }

    #[test]
    fn deviation_value_for_the_a_pooling_sender() {
        let g = parse_game(SIGNALING_FIXTURE).unwrap();
        let s = parse_shorthand(&g, "[(A,A);(L,R)]").unwrap();
        let p = coarsest_valid_partition(&g, false);
        let ctx = SceContext::new(&g, &s, &p, &TrembleFamily::Uniform);
        let chi = ratio(1, 5);
        let w = weights(&chi, &ratio(1, 2)).unwrap();
        let q = ctx.action_values(0, 0, g.root(), &w);
        assert_eq!(q, vec![ratio(2, 1), ratio(4, 1) * chi.clone() + (ratio(1, 1) - chi)]);
    }
}
