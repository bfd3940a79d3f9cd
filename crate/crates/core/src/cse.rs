//! Cursed sequential equilibrium.
//!
//! Player `i` perceives opponents of type profile `θ_{-i}` as playing
//! `σ^χ = χ·σ̄ + (1−χ)·σ_{-i}(·|θ_{-i})`, where `σ̄` averages opponents'
//! strategies over the current belief, and updates beliefs by Bayes' rule
//! against `σ^χ`. Off-path beliefs come from tremble limits computed in
//! leading-order arithmetic.

use std::collections::HashMap;

use crate::error::SolveError;
use crate::game::{Game, HistoryId};
use crate::lead::Lead;
use crate::perceived::{support_slack, Continuation, Problem};
use crate::profile::{BeliefSystem, Profile};
use crate::scalar::Scalar;
use crate::tremble::{LeadProfile, TrembleFamily};

fn check_chi<S: Scalar>(chi: &S) -> Result<(), SolveError> {
    if *chi < S::zero() || *chi > S::one() {
        return Err(SolveError::InvalidParameter(format!("chi must lie in [0,1], got {chi}")));
    }
    Ok(())
}

/// `σ̄_{-i}(a_{-i}|θ_i,h) = Σ_{θ_{-i}} μ(θ_{-i})·σ_{-i}(a_{-i}|θ_{-i},h)`,
/// indexed by opponent joint action.
pub fn average_strategy<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    belief: &[S],
    player: usize,
    own: usize,
    h: HistoryId,
) -> Vec<S> {
    let hist = game.history(h);
    let ts = game.types();
    (0..hist.others_joint_count(player))
        .map(|o| {
            belief.iter().enumerate().fold(S::zero(), |acc, (t, m)| {
                if m.is_zero() {
                    return acc;
                }
                let k = ts.join(player, own, t);
                acc + m.clone() * sigma.others_prob(game, player, h, k, o)
            })
        })
        .collect()
}

/// `σ^χ_{-i}(a_{-i}|θ_{-i},θ_i,h)` indexed `[θ_{-i}][a_{-i}]`.
pub fn chi_perceived<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    belief: &[S],
    chi: &S,
    player: usize,
    own: usize,
    h: HistoryId,
) -> Vec<Vec<S>> {
    let avg = average_strategy(game, sigma, belief, player, own, h);
    let ts = game.types();
    let rest = S::one() - chi.clone();
    (0..ts.others_count(player))
        .map(|t| {
            let k = ts.join(player, own, t);
            avg.iter()
                .enumerate()
                .map(|(o, a)| chi.clone() * a.clone() + rest.clone() * sigma.others_prob(game, player, h, k, o))
                .collect()
        })
        .collect()
}

/// One step of χ-cursed Bayes' rule after opponents play the opponent
/// component of `observed` (a joint action index at `h`).
#[allow(clippy::too_many_arguments)]
pub fn cursed_bayes_step<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    belief: &[S],
    chi: &S,
    player: usize,
    own: usize,
    h: HistoryId,
    observed: usize,
) -> Result<Vec<S>, SolveError> {
    let o = game.history(h).others_of_joint(player, observed);
    let perceived = chi_perceived(game, sigma, belief, chi, player, own, h);
    let post: Vec<S> = belief
        .iter()
        .zip(&perceived)
        .map(|(m, row)| m.clone() * row[o].clone())
        .collect();
    let total = post.iter().fold(S::zero(), |a, b| a + b.clone());
    if total <= S::zero() {
        return Err(SolveError::ZeroProbabilityObservation(game.display_history(h)));
    }
    Ok(post.into_iter().map(|x| x / total.clone()).collect())
}

/// `χ·μ + (1−χ)·Bayes(μ, σ)`: the closed form of the cursed update for a
/// totally mixed profile.
#[allow(clippy::too_many_arguments)]
pub fn cursed_bayes_closed_form<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    belief: &[S],
    chi: &S,
    player: usize,
    own: usize,
    h: HistoryId,
    observed: usize,
) -> Vec<S> {
    let hist = game.history(h);
    let o = hist.others_of_joint(player, observed);
    let ts = game.types();
    let like: Vec<S> = belief
        .iter()
        .enumerate()
        .map(|(t, m)| m.clone() * sigma.others_prob(game, player, h, ts.join(player, own, t), o))
        .collect();
    let total = like.iter().fold(S::zero(), |a, b| a + b.clone());
    let rest = S::one() - chi.clone();
    belief
        .iter()
        .zip(like)
        .map(|(m, l)| chi.clone() * m.clone() + rest.clone() * l / total.clone())
        .collect()
}

/// Beliefs of a totally mixed profile obtained by folding the cursed
/// update from the conditional prior.
pub fn belief_trajectory<S: Scalar>(game: &Game, sigma: &Profile<S>, chi: &S) -> Result<BeliefSystem<S>, SolveError> {
    check_chi(chi)?;
    if !sigma.is_totally_mixed() {
        return Err(SolveError::RequiresTotallyMixed);
    }
    let mut mu = BeliefSystem::prior(game);
    for i in 0..game.players() {
        for own in 0..game.types().count_of(i) {
            for h in game.non_terminal() {
                if h == game.root() {
                    continue;
                }
                let parent = game.history(h).parent.expect("non-root");
                let joint = game.history(parent).encode_joint(&game.history(h).last);
                let b = cursed_bayes_step(game, sigma, mu.get(i, own, parent), chi, i, own, parent, joint)?;
                mu.set(i, own, h, b);
            }
        }
    }
    Ok(mu)
}

/// Beliefs of an arbitrary profile as tremble limits, with the histories at
/// which the observation had vanishing perceived probability.
#[derive(Debug, Clone)]
pub struct ConsistentBeliefs<S> {
    pub beliefs: BeliefSystem<S>,
    /// `[player][own type][history]`: the step into `h` was unexpected.
    pub off_path: Vec<Vec<Vec<bool>>>,
    pub family: TrembleFamily,
}

/// Cursed update in leading-order arithmetic. Returns the normalized
/// posterior and whether the observation had vanishing probability.
#[allow(clippy::too_many_arguments)]
fn lead_step<S: Scalar>(
    game: &Game,
    lp: &LeadProfile<S>,
    mu: &[Lead<S>],
    chi: &S,
    player: usize,
    own: usize,
    h: HistoryId,
    o: usize,
) -> (Vec<Lead<S>>, bool) {
    let hist = game.history(h);
    let ts = game.types();
    let a = hist.decode_others(player, o);
    let like: Vec<Lead<S>> = (0..mu.len())
        .map(|t| {
            let types = ts.decode(ts.join(player, own, t));
            (0..game.players())
                .filter(|&j| j != player)
                .fold(Lead::constant(S::one()), |acc, j| acc * lp.get(j, types[j], h, a[j]).clone())
        })
        .collect();
    let avg = mu
        .iter()
        .zip(&like)
        .fold(Lead::Zero, |acc, (m, l)| acc + m.clone() * l.clone());
    let rest = S::one() - chi.clone();
    let post: Vec<Lead<S>> = mu
        .iter()
        .zip(&like)
        .map(|(m, l)| m.clone() * (avg.scale(chi) + l.scale(&rest)))
        .collect();
    let total = Lead::sum(post.iter());
    let unexpected = total.order().is_none_or(|k| k > 0);
    (Lead::normalize(&post).expect("full-support prior keeps some type alive"), unexpected)
}

/// Fills beliefs of `(player, own)` below `start` from a given belief at
/// `start`, following the tremble family at unexpected observations.
#[allow(clippy::too_many_arguments)]
fn propagate<S: Scalar>(
    game: &Game,
    lp: &LeadProfile<S>,
    chi: &S,
    player: usize,
    own: usize,
    start: HistoryId,
    at_start: Vec<Lead<S>>,
    beliefs: &mut BeliefSystem<S>,
    off_path: &mut [bool],
) {
    let mut stack = vec![(start, at_start)];
    while let Some((h, mu)) = stack.pop() {
        beliefs.set(player, own, h, mu.iter().map(|x| x.limit().expect("normalized")).collect());
        let hist = game.history(h);
        let mut cache: HashMap<usize, (Vec<Lead<S>>, bool)> = HashMap::new();
        for (joint, &child) in hist.children.iter().enumerate() {
            if game.history(child).is_terminal() {
                continue;
            }
            let o = hist.others_of_joint(player, joint);
            let (next, unexpected) = cache
                .entry(o)
                .or_insert_with(|| lead_step(game, lp, &mu, chi, player, own, h, o))
                .clone();
            off_path[child] = unexpected;
            stack.push((child, next));
        }
    }
}

const CONFIRM_EPS: f64 = 1e-8;
const CONFIRM_TOL: f64 = 1e-6;
const CONFIRM_MAX_HORIZON: usize = 12;

/// χ-consistent beliefs supported by the tremble family: limits of the
/// cursed updates of `(1−ε)σ + ε·direction` as `ε → 0`.
///
/// In floating-point mode the limit is confirmed against the numeric
/// trajectory at `ε = 1e-8`.
pub fn consistency_extend<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    chi: &S,
    family: &TrembleFamily,
) -> Result<ConsistentBeliefs<S>, SolveError> {
    check_chi(chi)?;
    let lp = LeadProfile::new(game, sigma, family);
    let mut beliefs = BeliefSystem::prior(game);
    let mut off_path = Vec::new();
    for i in 0..game.players() {
        let mut per_type = Vec::new();
        for own in 0..game.types().count_of(i) {
            let mut off = vec![false; game.non_terminal().end];
            let root: Vec<Lead<S>> = game.conditional_prior::<S>(i, own).into_iter().map(Lead::constant).collect();
            propagate(game, &lp, chi, i, own, game.root(), root, &mut beliefs, &mut off);
            per_type.push(off);
        }
        off_path.push(per_type);
    }
    if !S::EXACT && game.horizon() <= CONFIRM_MAX_HORIZON {
        let numeric = lp.eval(game, CONFIRM_EPS);
        let traj = belief_trajectory(game, &numeric, &chi.to_f64())?;
        for i in 0..game.players() {
            for own in 0..game.types().count_of(i) {
                for h in game.non_terminal() {
                    for (a, b) in beliefs.get(i, own, h).iter().zip(traj.get(i, own, h)) {
                        if (a.to_f64() - b).abs() > CONFIRM_TOL {
                            return Err(SolveError::LimitDidNotStabilize(format!(
                                "player {} at {}: limit {} vs {b} at eps={CONFIRM_EPS}",
                                i + 1,
                                game.display_history(h),
                                a
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(ConsistentBeliefs { beliefs, off_path, family: family.clone() })
}

/// Value of each own action at `(θ_i, h)` in the cursed perceived model.
#[allow(clippy::too_many_arguments)]
pub fn action_values_cse<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    beliefs: &BeliefSystem<S>,
    chi: &S,
    player: usize,
    own: usize,
    h: HistoryId,
    cont: Continuation<S>,
) -> Vec<S> {
    let init: Vec<(S, usize)> = beliefs.get(player, own, h).iter().cloned().zip(0..).collect();
    let problem = Problem { game, player, own, start: h };
    let mut cache: HashMap<HistoryId, Vec<Vec<S>>> = HashMap::new();
    let leaves = problem.leaf_weights(&init, |s, x| {
        cache
            .entry(x)
            .or_insert_with(|| chi_perceived(game, sigma, beliefs.get(player, own, x), chi, player, own, x))[s]
            .clone()
    });
    let values = problem.leaf_values(&init, &leaves);
    problem.action_values(&values, cont)
}

/// Cursed conditional expected payoff at `(θ_i, h)` when `i` follows
/// `own_strategy` from `h` on.
#[allow(clippy::too_many_arguments)]
pub fn expected_payoff_cse<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    beliefs: &BeliefSystem<S>,
    chi: &S,
    player: usize,
    own: usize,
    h: HistoryId,
    own_strategy: &Profile<S>,
) -> S {
    let q = action_values_cse(game, sigma, beliefs, chi, player, own, h, Continuation::Fixed(own_strategy));
    own_strategy
        .dist(player, own, h)
        .iter()
        .zip(q)
        .fold(S::zero(), |acc, (p, v)| acc + p.clone() * v)
}

/// A best-response failure at an information set.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation<S> {
    pub player: usize,
    pub own: usize,
    pub history: HistoryId,
    pub slack: S,
    pub values: Vec<S>,
}

/// Outcome of an equilibrium check.
#[derive(Debug, Clone)]
pub struct Verdict<S> {
    pub equilibrium: bool,
    pub worst_slack: S,
    pub violations: Vec<Violation<S>>,
    pub beliefs: BeliefSystem<S>,
    pub family: Option<TrembleFamily>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct CseOptions {
    /// Tremble families tried in order; `None` means all candidates.
    pub families: Option<Vec<TrembleFamily>>,
    /// Search off-path beliefs in the consistent set when every family fails.
    pub interval_search: bool,
    /// Compare against the best own continuation instead of `σ_i`.
    pub optimize_continuation: bool,
}

impl Default for CseOptions {
    fn default() -> Self {
        CseOptions { families: None, interval_search: true, optimize_continuation: false }
    }
}

/// Checks every information set of `(player, own)` below `root`.
#[allow(clippy::too_many_arguments)]
fn verify_type<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    beliefs: &BeliefSystem<S>,
    chi: &S,
    player: usize,
    own: usize,
    root: HistoryId,
    opts: &CseOptions,
) -> (S, Vec<Violation<S>>) {
    let mut worst = S::zero();
    let mut violations = Vec::new();
    for h in game.non_terminal() {
        if game.history(h).action_count(player) < 2 || !game.precedes_eq(root, h) {
            continue;
        }
        let cont = if opts.optimize_continuation { Continuation::Optimal } else { Continuation::Fixed(sigma) };
        let q = action_values_cse(game, sigma, beliefs, chi, player, own, h, cont);
        let slack = support_slack(&q, sigma.dist(player, own, h));
        if slack > worst {
            worst = slack.clone();
        }
        if slack > S::tolerance() {
            violations.push(Violation { player, own, history: h, slack, values: q });
        }
    }
    (worst, violations)
}

fn verify_all<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    beliefs: &BeliefSystem<S>,
    chi: &S,
    opts: &CseOptions,
) -> (S, Vec<Violation<S>>) {
    let mut worst = S::zero();
    let mut violations = Vec::new();
    for i in 0..game.players() {
        for own in 0..game.types().count_of(i) {
            let (w, v) = verify_type(game, sigma, beliefs, chi, i, own, game.root(), opts);
            if w > worst {
                worst = w;
            }
            violations.extend(v);
        }
    }
    (worst, violations)
}

/// Whether `beliefs` can arise from some tremble sequence: the conditional
/// prior at the root, the cursed update after expected observations, and a
/// point of `{χ·μ_prev + (1−χ)·ν : ν ∈ Δ(supp μ_prev)}` after unexpected
/// ones.
pub fn is_chi_consistent<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    chi: &S,
    beliefs: &BeliefSystem<S>,
) -> Result<(), String> {
    let ts = game.types();
    let close = |a: &[S], b: &[S]| a.iter().zip(b).all(|(x, y)| x.approx_eq(y));
    for i in 0..game.players() {
        for own in 0..ts.count_of(i) {
            let root = beliefs.get(i, own, game.root());
            if !close(root, &game.conditional_prior::<S>(i, own)) {
                return Err(format!("player {} root belief differs from the conditional prior", i + 1));
            }
            for h in game.non_terminal() {
                let Some(parent) = game.history(h).parent else { continue };
                let prev = beliefs.get(i, own, parent);
                let cur = beliefs.get(i, own, h);
                let sum = cur.iter().fold(S::zero(), |a, b| a + b.clone());
                if !sum.approx_eq(&S::one()) || cur.iter().any(|x| *x < -S::tolerance()) {
                    return Err(format!("player {} belief at {} is not a distribution", i + 1, game.display_history(h)));
                }
                let joint = game.history(parent).encode_joint(&game.history(h).last);
                match cursed_bayes_step(game, sigma, prev, chi, i, own, parent, joint) {
                    Ok(expected) => {
                        if !close(cur, &expected) {
                            return Err(format!(
                                "player {} belief at {} does not follow the cursed update",
                                i + 1,
                                game.display_history(h)
                            ));
                        }
                    }
                    Err(_) => {
                        let ok = cur.iter().zip(prev).all(|(c, p)| {
                            c.approx_ge(&(chi.clone() * p.clone()))
                                && (!p.is_zero() || c.approx_eq(&S::zero()) || *chi == S::one())
                        });
                        if !ok {
                            return Err(format!(
                                "player {} off-path belief at {} violates the dampened bound",
                                i + 1,
                                game.display_history(h)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Candidate beliefs at an unexpected history: `χ·μ_prev + (1−χ)·ν` for ν
/// at the vertices of `Δ(supp μ_prev)` and on a grid along its edges.
fn candidate_beliefs<S: Scalar>(prev: &[S], chi: &S) -> Vec<Vec<S>> {
    let support: Vec<usize> = (0..prev.len()).filter(|&t| !prev[t].is_zero()).collect();
    let mut nus: Vec<Vec<S>> = Vec::new();
    let vertex = |t: usize| (0..prev.len()).map(|x| if x == t { S::one() } else { S::zero() }).collect::<Vec<S>>();
    for &t in &support {
        nus.push(vertex(t));
    }
    const STEPS: i64 = 8;
    for (a, &s) in support.iter().enumerate() {
        for &t in &support[a + 1..] {
            for k in 1..STEPS {
                let lam = S::from_ratio(k, STEPS);
                nus.push(
                    (0..prev.len())
                        .map(|x| {
                            if x == s {
                                lam.clone()
                            } else if x == t {
                                S::one() - lam.clone()
                            } else {
                                S::zero()
                            }
                        })
                        .collect(),
                );
            }
        }
    }
    let rest = S::one() - chi.clone();
    nus.into_iter()
        .map(|nu| prev.iter().zip(nu).map(|(p, n)| chi.clone() * p.clone() + rest.clone() * n).collect())
        .collect()
}

/// Tries to clear the violations of `(player, own)` by moving beliefs at
/// unexpected histories within the consistent set, top-down.
#[allow(clippy::too_many_arguments)]
fn repair_type<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    chi: &S,
    base: &ConsistentBeliefs<S>,
    player: usize,
    own: usize,
    beliefs: &mut BeliefSystem<S>,
    opts: &CseOptions,
) -> bool {
    let lp = LeadProfile::new(game, sigma, &base.family);
    let mut off = base.off_path[player][own].clone();
    let (_, mut violations) = verify_type(game, sigma, beliefs, chi, player, own, game.root(), opts);
    let mut entries: Vec<HistoryId> = game
        .non_terminal()
        .filter(|&h| off[h] && violations.iter().any(|v| game.precedes_eq(h, v.history)))
        .collect();
    entries.sort_by_key(|&h| (game.history(h).stage, h));
    for h in entries {
        if violations.is_empty() {
            return true;
        }
        if !off[h] || !violations.iter().any(|v| game.precedes_eq(h, v.history)) {
            continue;
        }
        let parent = game.history(h).parent.expect("unexpected history has a parent");
        let prev = beliefs.get(player, own, parent).to_vec();
        let mut best: Option<(S, BeliefSystem<S>, Vec<bool>)> = None;
        for cand in candidate_beliefs(&prev, chi) {
            let mut trial = beliefs.clone();
            let mut trial_off = off.clone();
            let lead: Vec<Lead<S>> = cand.into_iter().map(Lead::constant).collect();
            propagate(game, &lp, chi, player, own, h, lead, &mut trial, &mut trial_off);
            let (w, v) = verify_type(game, sigma, &trial, chi, player, own, h, opts);
            let clear = v.is_empty();
            if best.as_ref().is_none_or(|(bw, _, _)| w < *bw) {
                best = Some((w, trial, trial_off));
            }
            if clear {
                break;
            }
        }
        if let Some((_, trial, trial_off)) = best {
            *beliefs = trial;
            off = trial_off;
        }
        violations = verify_type(game, sigma, beliefs, chi, player, own, game.root(), opts).1;
    }
    violations.is_empty()
}

/// χ-CSE check. With `supplied` beliefs, verifies them for χ-consistency
/// and best responses; otherwise tries the tremble families and, if all
/// fail, searches consistent off-path beliefs.
pub fn check_cse<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    chi: &S,
    supplied: Option<&BeliefSystem<S>>,
    opts: &CseOptions,
) -> Result<Verdict<S>, SolveError> {
    check_chi(chi)?;
    sigma.validate(game)?;
    if let Some(mu) = supplied {
        let mut notes = Vec::new();
        let consistent = is_chi_consistent(game, sigma, chi, mu);
        if let Err(e) = &consistent {
            notes.push(format!("supplied beliefs are not chi-consistent: {e}"));
        }
        let (worst, violations) = verify_all(game, sigma, mu, chi, opts);
        return Ok(Verdict {
            equilibrium: consistent.is_ok() && violations.is_empty(),
            worst_slack: worst,
            violations,
            beliefs: mu.clone(),
            family: None,
            notes,
        });
    }
    let families = opts.families.clone().unwrap_or_else(|| TrembleFamily::candidates(game));
    let mut tried: Vec<(ConsistentBeliefs<S>, S, Vec<Violation<S>>)> = Vec::new();
    for fam in &families {
        let cb = consistency_extend(game, sigma, chi, fam)?;
        let (worst, violations) = verify_all(game, sigma, &cb.beliefs, chi, opts);
        if violations.is_empty() {
            return Ok(Verdict {
                equilibrium: true,
                worst_slack: worst,
                violations,
                beliefs: cb.beliefs,
                family: Some(fam.clone()),
                notes: Vec::new(),
            });
        }
        tried.push((cb, worst, violations));
    }
    if opts.interval_search {
        for (cb, _, violations) in &tried {
            let mut beliefs = cb.beliefs.clone();
            let mut failing: Vec<(usize, usize)> = violations.iter().map(|v| (v.player, v.own)).collect();
            failing.dedup();
            let all_fixed = failing
                .iter()
                .all(|&(i, own)| repair_type(game, sigma, chi, cb, i, own, &mut beliefs, opts));
            if all_fixed {
                let (worst, violations) = verify_all(game, sigma, &beliefs, chi, opts);
                if violations.is_empty() {
                    return Ok(Verdict {
                        equilibrium: true,
                        worst_slack: worst,
                        violations,
                        beliefs,
                        family: Some(cb.family.clone()),
                        notes: vec!["off-path beliefs chosen by search over the consistent set".into()],
                    });
                }
            }
        }
    }
    let best = tried
        .into_iter()
        .reduce(|a, b| if b.1 < a.1 { b } else { a })
        .expect("at least one tremble family");
    Ok(Verdict {
        equilibrium: false,
        worst_slack: best.1,
        violations: best.2,
        beliefs: best.0.beliefs,
        family: Some(best.0.family),
        notes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_game, SIGNALING_FIXTURE};
    use crate::profile::parse_shorthand;
    use crate::scalar::{ratio, Rational};

    fn signaling() -> Game {
        parse_game(SIGNALING_FIXTURE).unwrap()
    }

    #[test]
    fn uniform_profile_keeps_the_prior() {
        let g = signaling();
        let sigma: Profile<Rational> = Profile::uniform(&g);
        let mu = belief_trajectory(&g, &sigma, &ratio(1, 3)).unwrap();
        for h in g.non_terminal() {
            assert_eq!(mu.get(1, 0, h), &[ratio(1, 4), ratio(3, 4)]);
        }
    }

    #[test]
    fn pooling_off_path_belief_under_uniform_trembles() {
        let g = signaling();
        let sigma = parse_shorthand(&g, "[(B,B);(R,R)]").unwrap();
        let a = g.parse_history("A").unwrap();
        for chi in [ratio(0, 1), ratio(1, 2), ratio(1, 1)] {
            let cb = consistency_extend(&g, &sigma, &chi, &TrembleFamily::Uniform).unwrap();
            assert_eq!(cb.beliefs.get(1, 0, a), &[ratio(1, 4), ratio(3, 4)]);
            assert!(cb.off_path[1][0][a]);
        }
        let cb = consistency_extend(&g, &sigma, &ratio(1, 2), &TrembleFamily::FavoredTypes(vec![0, 0])).unwrap();
        assert_eq!(cb.beliefs.get(1, 0, a)[0], ratio(5, 8));
    }

    #[test]
    fn float_limit_is_confirmed() {
        let g = signaling();
        let sigma = parse_shorthand(&g, "[(B,A);(L,R)]").unwrap().to_f64();
        let cb = consistency_extend(&g, &sigma, &0.3, &TrembleFamily::Uniform).unwrap();
        let a = g.parse_history("A").unwrap();
        assert!((cb.beliefs.get(1, 0, a)[0] - 0.3 * 0.25).abs() < 1e-12);
    }

    #[test]
    fn boundary_of_the_b_pooling_equilibrium() {
        let g = signaling();
        let sigma = parse_shorthand(&g, "[(B,B);(R,R)]").unwrap();
        let opts = CseOptions::default();
        assert!(check_cse(&g, &sigma, &ratio(8, 9), None, &opts).unwrap().equilibrium);
        assert!(!check_cse(&g, &sigma, &ratio(9, 10), None, &opts).unwrap().equilibrium);
    }

    #[test]
    fn interval_search_finds_interior_beliefs() {
        let g = signaling();
        let sigma = parse_shorthand(&g, "[(B,B);(R,R)]").unwrap();
        let opts = CseOptions { families: Some(vec![TrembleFamily::Uniform]), ..CseOptions::default() };
        let v = check_cse(&g, &sigma, &ratio(1, 2), None, &opts).unwrap();
        assert!(v.equilibrium);
        let off = CseOptions { interval_search: false, ..opts };
        assert!(!check_cse(&g, &sigma, &ratio(1, 2), None, &off).unwrap().equilibrium);
    }
}
