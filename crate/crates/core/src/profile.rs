//! Behavioral strategy profiles and belief systems.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{GameError, ProfileError};
use crate::game::{Game, HistoryId};
use crate::scalar::{format_rational, parse_rational, rational_to_f64, Rational, Scalar};

/// `σ_i(a | θ_i, h)` indexed `[player][own type][history][action]` over
/// non-terminal histories.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile<S> {
    probs: Vec<Vec<Vec<Vec<S>>>>,
}

impl<S: Scalar> Profile<S> {
    pub fn from_fn<F>(game: &Game, mut f: F) -> Self
    where
        F: FnMut(usize, usize, HistoryId) -> Vec<S>,
    {
        let probs = (0..game.players())
            .map(|i| {
                (0..game.types().count_of(i))
                    .map(|ti| game.non_terminal().map(|h| f(i, ti, h)).collect())
                    .collect()
            })
            .collect();
        Profile { probs }
    }

    pub fn uniform(game: &Game) -> Self {
        Profile::from_fn(game, |i, _, h| {
            let k = game.history(h).action_count(i);
            vec![S::from_ratio(1, k as i64); k]
        })
    }

    /// Pure profile from a choice of action index.
    pub fn pure<F>(game: &Game, mut choose: F) -> Self
    where
        F: FnMut(usize, usize, HistoryId) -> usize,
    {
        Profile::from_fn(game, |i, ti, h| {
            let k = game.history(h).action_count(i);
            let a = choose(i, ti, h);
            (0..k).map(|x| if x == a { S::one() } else { S::zero() }).collect()
        })
    }

    pub fn dist(&self, player: usize, own: usize, h: HistoryId) -> &[S] {
        &self.probs[player][own][h]
    }

    pub fn prob(&self, player: usize, own: usize, h: HistoryId, action: usize) -> &S {
        &self.probs[player][own][h][action]
    }

    pub fn set(&mut self, player: usize, own: usize, h: HistoryId, dist: Vec<S>) {
        self.probs[player][own][h] = dist;
    }

    pub fn players(&self) -> usize {
        self.probs.len()
    }

    /// Probability of a joint action at `h` given the full type profile.
    pub fn joint_prob(&self, game: &Game, h: HistoryId, profile: usize, joint: usize) -> S {
        let hist = game.history(h);
        let a = hist.decode_joint(joint);
        let types = game.types().decode(profile);
        a.iter()
            .enumerate()
            .fold(S::one(), |acc, (i, &ai)| acc * self.probs[i][types[i]][h][ai].clone())
    }

    /// `σ_{-i}(a_{-i} | θ_{-i}, h)` for an opponent joint index.
    pub fn others_prob(
        &self,
        game: &Game,
        player: usize,
        h: HistoryId,
        profile: usize,
        others: usize,
    ) -> S {
        let hist = game.history(h);
        let a = hist.decode_others(player, others);
        let types = game.types().decode(profile);
        (0..game.players())
            .filter(|&j| j != player)
            .fold(S::one(), |acc, j| acc * self.probs[j][types[j]][h][a[j]].clone())
    }

    pub fn is_totally_mixed(&self) -> bool {
        self.probs
            .iter()
            .flatten()
            .flatten()
            .all(|d| d.iter().all(|p| *p > S::zero()))
    }

    /// Checks every row is a distribution (exact, or within `1e-12`).
    pub fn validate(&self, game: &Game) -> Result<(), ProfileError> {
        for (i, by_type) in self.probs.iter().enumerate() {
            for row in by_type {
                for (h, d) in row.iter().enumerate() {
                    if d.len() != game.history(h).action_count(i) {
                        return Err(ProfileError::Invalid(format!(
                            "player {} has {} probabilities at {} for {} actions",
                            i + 1,
                            d.len(),
                            game.display_history(h),
                            game.history(h).action_count(i)
                        )));
                    }
                    let sum = d.iter().fold(S::zero(), |a, b| a + b.clone());
                    let off = (sum.clone() - S::one()).to_f64().abs();
                    let bad = if S::EXACT { sum != S::one() } else { off > 1e-12 };
                    if bad || d.iter().any(|p| *p < S::zero()) {
                        return Err(ProfileError::NotNormalized {
                            player: i + 1,
                            history: game.display_history(h),
                            sum: sum.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Action index played with probability one, if the row is degenerate.
    pub fn pure_action(&self, player: usize, own: usize, h: HistoryId) -> Option<usize> {
        let d = &self.probs[player][own][h];
        let ones: Vec<usize> = (0..d.len()).filter(|&a| d[a] == S::one()).collect();
        (ones.len() == 1).then(|| ones[0])
    }

    pub fn is_pure(&self) -> bool {
        (0..self.probs.len()).all(|i| {
            (0..self.probs[i].len())
                .all(|t| (0..self.probs[i][t].len()).all(|h| self.pure_action(i, t, h).is_some()))
        })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Profile<T> {
        Profile {
            probs: self
                .probs
                .iter()
                .map(|x| x.iter().map(|y| y.iter().map(|d| d.iter().map(&f).collect()).collect()).collect())
                .collect(),
        }
    }
}

impl Profile<Rational> {
    pub fn to_f64(&self) -> Profile<f64> {
        self.map(rational_to_f64)
    }

    pub fn convert<S: Scalar>(&self) -> Profile<S> {
        self.map(S::from_rational)
    }
}

/// Largest number of pure profiles any enumeration will visit.
pub const MAX_PURE_PROFILES: u128 = 10_000_000;

/// Pure type-contingent profiles, indexed in mixed radix over the
/// `(player, type, history)` slots with more than one action. Earlier slots
/// vary slowest.
#[derive(Debug, Clone)]
pub struct PureSpace {
    slots: Vec<(usize, usize, HistoryId, usize)>,
    total: u128,
}

impl PureSpace {
    pub fn new(game: &Game) -> Self {
        let mut slots = Vec::new();
        for i in 0..game.players() {
            for t in 0..game.types().count_of(i) {
                for h in game.non_terminal() {
                    let n = game.history(h).action_count(i);
                    if n > 1 {
                        slots.push((i, t, h, n));
                    }
                }
            }
        }
        let total = slots.iter().fold(1u128, |acc, s| acc.saturating_mul(s.3 as u128));
        PureSpace { slots, total }
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    /// Fails when the space exceeds `limit` profiles.
    pub fn guard(&self, limit: u128) -> Result<usize, u128> {
        if self.total > limit {
            Err(self.total)
        } else {
            Ok(self.total as usize)
        }
    }

    pub fn nth<S: Scalar>(&self, game: &Game, index: usize) -> Profile<S> {
        let mut choice = vec![0; self.slots.len()];
        let mut rest = index;
        for k in (0..self.slots.len()).rev() {
            choice[k] = rest % self.slots[k].3;
            rest /= self.slots[k].3;
        }
        let lookup: std::collections::HashMap<(usize, usize, HistoryId), usize> = self
            .slots
            .iter()
            .zip(&choice)
            .map(|(&(i, t, h, _), &c)| ((i, t, h), c))
            .collect();
        Profile::pure(game, |i, t, h| lookup.get(&(i, t, h)).copied().unwrap_or(0))
    }
}

/// Probability that play starting at `from` ends at the terminal `to`
/// given the full type profile.
pub fn terminal_reach_probability<S: Scalar>(
    game: &Game,
    sigma: &Profile<S>,
    profile: usize,
    from: HistoryId,
    to: HistoryId,
) -> Result<S, GameError> {
    let stage = game.history(to).stage;
    if stage != game.horizon() {
        return Err(GameError::StageOutOfRange { stage, horizon: game.horizon() });
    }
    if !game.precedes_eq(from, to) {
        return Ok(S::zero());
    }
    let mut p = S::one();
    let mut cur = to;
    while cur != from {
        let h = game.history(cur);
        let parent = h.parent.expect("descendant has a parent");
        let joint = game.history(parent).encode_joint(&h.last);
        p = p * sigma.joint_prob(game, parent, profile, joint);
        cur = parent;
    }
    Ok(p)
}

/// `μ_i(θ_{-i} | θ_i, h)` indexed `[player][own type][history][others]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefSystem<S> {
    beliefs: Vec<Vec<Vec<Vec<S>>>>,
}

impl<S: Scalar> BeliefSystem<S> {
    /// Conditional prior at every history.
    pub fn prior(game: &Game) -> Self {
        let beliefs = (0..game.players())
            .map(|i| {
                (0..game.types().count_of(i))
                    .map(|ti| {
                        let p = game.conditional_prior::<S>(i, ti);
                        game.non_terminal().map(|_| p.clone()).collect()
                    })
                    .collect()
            })
            .collect();
        BeliefSystem { beliefs }
    }

    pub fn get(&self, player: usize, own: usize, h: HistoryId) -> &[S] {
        &self.beliefs[player][own][h]
    }

    pub fn set(&mut self, player: usize, own: usize, h: HistoryId, belief: Vec<S>) {
        self.beliefs[player][own][h] = belief;
    }

    pub fn players(&self) -> usize {
        self.beliefs.len()
    }

    /// Largest deviation of a row sum from one.
    pub fn max_normalization_error(&self) -> f64 {
        self.beliefs
            .iter()
            .flatten()
            .flatten()
            .map(|row| {
                let s = row.iter().fold(S::zero(), |a, b| a + b.clone());
                (s.to_f64() - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BeliefSystem<T> {
        BeliefSystem {
            beliefs: self
                .beliefs
                .iter()
                .map(|x| x.iter().map(|y| y.iter().map(|d| d.iter().map(&f).collect()).collect()).collect())
                .collect(),
        }
    }
}

fn label_matches(label: &str, wanted: &str) -> bool {
    if label == wanted {
        return true;
    }
    let base = label.split('@').next().unwrap_or(label);
    let w = wanted.trim_end_matches(['\'', '′']);
    let primes = wanted.len() - w.len();
    base == wanted || (primes > 0 && base == w)
}

fn find_action(game: &Game, player: usize, h: HistoryId, wanted: &str) -> Result<usize, ProfileError> {
    let set = &game.history(h).actions[player];
    if let Some(a) = set.iter().position(|l| l == wanted) {
        return Ok(a);
    }
    let hits: Vec<usize> = (0..set.len()).filter(|&a| label_matches(&set[a], wanted)).collect();
    match hits.as_slice() {
        [a] => Ok(*a),
        _ => Err(ProfileError::UnknownAction {
            player: player + 1,
            history: game.display_history(h),
            label: wanted.to_string(),
        }),
    }
}

/// Decision points of the shorthand notation: groups ordered by stage then
/// player (only players with a non-singleton set somewhere in the stage);
/// within a group, histories in tree order, then own types.
pub fn shorthand_slots(game: &Game) -> Vec<Vec<(usize, usize, HistoryId)>> {
    let mut groups = Vec::new();
    for t in 0..game.horizon() {
        for i in 0..game.players() {
            let hs: Vec<HistoryId> = game
                .stage(t)
                .filter(|&h| game.history(h).action_count(i) > 1)
                .collect();
            if hs.is_empty() {
                continue;
            }
            let mut group = Vec::new();
            for &h in &hs {
                for ti in 0..game.types().count_of(i) {
                    group.push((i, ti, h));
                }
            }
            groups.push(group);
        }
    }
    groups
}

/// Parses the compact pure-profile notation, e.g. `[(A,A);(L,R)]`.
pub fn parse_shorthand(game: &Game, text: &str) -> Result<Profile<Rational>, ProfileError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| ProfileError::Invalid(format!("expected `[...]`, got `{t}`")))?;
    let entries: Vec<Vec<String>> = inner
        .split(';')
        .map(|g| {
            let g = g.trim();
            let g = g.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(g);
            g.split(',').map(|s| s.trim().to_string()).collect()
        })
        .collect();
    let slots = shorthand_slots(game);
    if entries.len() != slots.len() {
        return Err(ProfileError::Invalid(format!(
            "profile has {} groups, the game has {} decision groups",
            entries.len(),
            slots.len()
        )));
    }
    let mut choice: BTreeMap<(usize, usize, HistoryId), usize> = BTreeMap::new();
    for (group, labels) in slots.iter().zip(&entries) {
        if group.len() != labels.len() {
            return Err(ProfileError::Invalid(format!(
                "group `({})` has {} entries, expected {}",
                labels.join(","),
                labels.len(),
                group.len()
            )));
        }
        for (&(i, ti, h), l) in group.iter().zip(labels) {
            choice.insert((i, ti, h), find_action(game, i, h, l)?);
        }
    }
    Ok(Profile::pure(game, |i, ti, h| choice.get(&(i, ti, h)).copied().unwrap_or(0)))
}

/// Compact notation of a pure profile; `None` for mixed profiles.
pub fn format_shorthand<S: Scalar>(game: &Game, sigma: &Profile<S>) -> Option<String> {
    let mut groups = Vec::new();
    for group in shorthand_slots(game) {
        let mut labels = Vec::new();
        for (i, ti, h) in group {
            let a = sigma.pure_action(i, ti, h)?;
            labels.push(game.history(h).actions[i][a].clone());
        }
        groups.push(if labels.len() == 1 {
            labels.pop().unwrap()
        } else {
            format!("({})", labels.join(","))
        });
    }
    Some(format!("[{}]", groups.join(";")))
}

fn json_number(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok(),
        Value::Number(n) => parse_rational(&n.to_string()).ok(),
        _ => None,
    }
}

fn expand_types(game: &Game, player: usize, entry: &Value) -> Result<Vec<usize>, ProfileError> {
    match entry.get("type").and_then(Value::as_str) {
        None | Some("*") => Ok((0..game.types().count_of(player)).collect()),
        Some(l) => game
            .types()
            .labels(player)
            .iter()
            .position(|x| x == l)
            .map(|t| vec![t])
            .ok_or_else(|| ProfileError::Invalid(format!("player {} has no type `{l}`", player + 1))),
    }
}

fn expand_histories(game: &Game, entry: &Value) -> Result<Vec<HistoryId>, ProfileError> {
    match entry.get("history") {
        None => Ok(vec![game.root()]),
        Some(Value::String(s)) if s.trim() == "*" => Ok(game.non_terminal().collect()),
        Some(Value::String(s)) => {
            let h = game
                .parse_history(s)
                .filter(|&h| !game.history(h).is_terminal())
                .ok_or_else(|| ProfileError::Invalid(format!("unknown non-terminal history `{s}`")))?;
            Ok(vec![h])
        }
        Some(other) => Err(ProfileError::Invalid(format!("history must be a string, got {other}"))),
    }
}

/// Parses a JSON profile: a list of entries
/// `{"player": 1, "type": "t1", "history": "A", "action": "L"}` or with
/// `"dist": {"L": "1/3", "R": "2/3"}`. `type` may be omitted or `*` for all
/// types and `history` may be `*` for every history where the label exists.
/// Rows of players with a single action need no entry.
pub fn parse_profile_json(game: &Game, text: &str) -> Result<Profile<Rational>, ProfileError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| ProfileError::Invalid(format!("bad JSON: {e}")))?;
    let entries = value
        .as_array()
        .ok_or_else(|| ProfileError::Invalid("profile JSON must be a list of entries".into()))?;
    let mut rows: BTreeMap<(usize, usize, HistoryId), Vec<Rational>> = BTreeMap::new();
    for entry in entries {
        let player = entry
            .get("player")
            .and_then(Value::as_u64)
            .filter(|&p| p >= 1 && (p as usize) <= game.players())
            .ok_or_else(|| ProfileError::Invalid(format!("bad or missing player in {entry}")))?
            as usize
            - 1;
        let types = expand_types(game, player, entry)?;
        let wildcard = entry.get("history").and_then(Value::as_str) == Some("*");
        for h in expand_histories(game, entry)? {
            let k = game.history(h).action_count(player);
            let dist = if let Some(a) = entry.get("action").and_then(Value::as_str) {
                match find_action(game, player, h, a) {
                    Ok(x) => {
                        let mut d = vec![Rational::from_integer(0.into()); k];
                        d[x] = Rational::from_integer(1.into());
                        d
                    }
                    Err(_) if wildcard => continue,
                    Err(e) => return Err(e),
                }
            } else if let Some(obj) = entry.get("dist").and_then(Value::as_object) {
                let mut d = vec![Rational::from_integer(0.into()); k];
                let mut ok = true;
                for (label, p) in obj {
                    match find_action(game, player, h, label) {
                        Ok(x) => {
                            d[x] = json_number(p).ok_or_else(|| {
                                ProfileError::Invalid(format!("bad probability {p}"))
                            })?
                        }
                        Err(_) if wildcard => ok = false,
                        Err(e) => return Err(e),
                    }
                }
                if !ok {
                    continue;
                }
                d
            } else {
                return Err(ProfileError::Invalid(format!("entry needs `action` or `dist`: {entry}")));
            };
            for &ti in &types {
                rows.insert((player, ti, h), dist.clone());
            }
        }
    }
    let mut missing = Vec::new();
    let sigma = Profile::from_fn(game, |i, ti, h| {
        let k = game.history(h).action_count(i);
        match rows.get(&(i, ti, h)) {
            Some(d) => d.clone(),
            None => {
                if k > 1 {
                    missing.push(format!(
                        "player {} type {} at {}",
                        i + 1,
                        game.types().label(i, ti),
                        game.display_history(h)
                    ));
                }
                vec![Rational::from_integer(1.into()) / Rational::from_integer((k as i64).into()); k]
            }
        }
    });
    if !missing.is_empty() {
        return Err(ProfileError::Invalid(format!("no strategy for {}", missing.join("; "))));
    }
    sigma.validate(game)?;
    Ok(sigma)
}

/// Accepts either the JSON form or the compact bracket notation.
pub fn parse_profile(game: &Game, text: &str) -> Result<Profile<Rational>, ProfileError> {
    let t = text.trim();
    if t.starts_with("[{") || t.starts_with("[ {") || t.starts_with("[\n") || t == "[]" {
        parse_profile_json(game, t)
    } else {
        parse_shorthand(game, t)
    }
}

/// JSON form of a profile, listing every decision row with a non-singleton
/// action set.
pub fn profile_to_json(game: &Game, sigma: &Profile<Rational>) -> Value {
    let mut out = Vec::new();
    for i in 0..game.players() {
        for ti in 0..game.types().count_of(i) {
            for h in game.non_terminal() {
                let set = &game.history(h).actions[i];
                if set.len() < 2 {
                    continue;
                }
                let mut entry = serde_json::Map::new();
                entry.insert("player".into(), (i + 1).into());
                entry.insert("type".into(), game.types().label(i, ti).into());
                entry.insert("history".into(), game.history_string(h).into());
                match sigma.pure_action(i, ti, h) {
                    Some(a) => {
                        entry.insert("action".into(), set[a].clone().into());
                    }
                    None => {
                        let dist: serde_json::Map<String, Value> = set
                            .iter()
                            .zip(sigma.dist(i, ti, h))
                            .map(|(l, p)| (l.clone(), Value::String(format_rational(p))))
                            .collect();
                        entry.insert("dist".into(), Value::Object(dist));
                    }
                }
                out.push(Value::Object(entry));
            }
        }
    }
    Value::Array(out)
}

