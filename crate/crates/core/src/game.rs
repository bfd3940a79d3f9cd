//! Finite multi-stage games with observed actions.
//!
//! Nature draws a type profile once, then players move simultaneously in
//! stages `1..=T` and every stage action profile becomes public. The
//! public-history tree is materialized in breadth-first order: stage by
//! stage, and within a stage lexicographically by the joint action index
//! (player 1 most significant, labels in declaration order).

use num_traits::{One, Zero};

use crate::error::GameError;
use crate::scalar::{format_rational, rational_to_f64, Rational, Scalar};

/// Index of a public history in [`Game::histories`].
pub type HistoryId = usize;

/// Label used for the singleton action of a player who does not move.
pub const PASS: &str = "pass";

const MAX_HISTORIES: usize = 4_000_000;

/// Mixed-radix indexing of type profiles `Θ = Θ_1 × … × Θ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeSpace {
    labels: Vec<Vec<String>>,
    count: usize,
}

impl TypeSpace {
    pub fn new(labels: Vec<Vec<String>>) -> Self {
        let count = labels.iter().map(Vec::len).product();
        TypeSpace { labels, count }
    }

    pub fn players(&self) -> usize {
        self.labels.len()
    }

    /// `|Θ|`.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn count_of(&self, player: usize) -> usize {
        self.labels[player].len()
    }

    pub fn labels(&self, player: usize) -> &[String] {
        &self.labels[player]
    }

    pub fn label(&self, player: usize, ty: usize) -> &str {
        &self.labels[player][ty]
    }

    pub fn decode(&self, profile: usize) -> Vec<usize> {
        let mut out = vec![0; self.labels.len()];
        let mut rest = profile;
        for (i, l) in self.labels.iter().enumerate().rev() {
            out[i] = rest % l.len();
            rest /= l.len();
        }
        out
    }

    pub fn encode(&self, types: &[usize]) -> usize {
        types
            .iter()
            .zip(&self.labels)
            .fold(0, |acc, (t, l)| acc * l.len() + t)
    }

    pub fn type_of(&self, profile: usize, player: usize) -> usize {
        let mut rest = profile;
        for i in (player + 1..self.labels.len()).rev() {
            rest /= self.labels[i].len();
        }
        rest % self.labels[player].len()
    }

    /// `|Θ_{-i}|`.
    pub fn others_count(&self, player: usize) -> usize {
        self.count / self.labels[player].len()
    }

    /// Index of `θ_{-i}` within `Θ_{-i}` (mixed radix over `j ≠ i`).
    pub fn others_index(&self, player: usize, profile: usize) -> usize {
        let types = self.decode(profile);
        types
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != player)
            .fold(0, |acc, (j, t)| acc * self.labels[j].len() + t)
    }

    /// Full profile index from `θ_i` and the index of `θ_{-i}`.
    pub fn join(&self, player: usize, own: usize, others: usize) -> usize {
        let mut types = vec![0; self.labels.len()];
        let mut rest = others;
        for j in (0..self.labels.len()).rev() {
            if j == player {
                continue;
            }
            types[j] = rest % self.labels[j].len();
            rest /= self.labels[j].len();
        }
        types[player] = own;
        self.encode(&types)
    }

    /// Players whose type label is part of written type tuples.
    pub fn typed_players(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&i| self.labels[i].len() > 1 || self.labels[i][0] != "-")
            .collect()
    }

    pub fn describe(&self, profile: usize) -> String {
        let types = self.decode(profile);
        self.typed_players()
            .into_iter()
            .map(|i| self.labels[i][types[i]].clone())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// A node of the public-history tree.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    pub id: HistoryId,
    pub stage: usize,
    pub parent: Option<HistoryId>,
    /// Action indices of the stage profile that led here (empty at the root).
    pub last: Vec<usize>,
    /// Position among the histories of the same stage.
    pub index_in_stage: usize,
    /// `A_i(h)` per player; empty for terminal histories.
    pub actions: Vec<Vec<String>>,
    /// Children indexed by joint action (player 1 most significant).
    pub children: Vec<HistoryId>,
    /// Position among terminal histories.
    pub terminal: Option<usize>,
}

impl History {
    pub fn is_terminal(&self) -> bool {
        self.terminal.is_some()
    }

    pub fn action_count(&self, player: usize) -> usize {
        self.actions[player].len()
    }

    pub fn joint_count(&self) -> usize {
        self.actions.iter().map(Vec::len).product()
    }

    pub fn decode_joint(&self, joint: usize) -> Vec<usize> {
        let mut out = vec![0; self.actions.len()];
        let mut rest = joint;
        for (i, a) in self.actions.iter().enumerate().rev() {
            out[i] = rest % a.len();
            rest /= a.len();
        }
        out
    }

    pub fn encode_joint(&self, actions: &[usize]) -> usize {
        actions
            .iter()
            .zip(&self.actions)
            .fold(0, |acc, (a, set)| acc * set.len() + a)
    }

    /// Number of opponent joint actions `|A_{-i}(h)|`.
    pub fn others_joint_count(&self, player: usize) -> usize {
        self.joint_count() / self.actions[player].len()
    }

    pub fn decode_others(&self, player: usize, others: usize) -> Vec<usize> {
        let mut out = vec![0; self.actions.len()];
        let mut rest = others;
        for j in (0..self.actions.len()).rev() {
            if j == player {
                continue;
            }
            out[j] = rest % self.actions[j].len();
            rest /= self.actions[j].len();
        }
        out
    }

    pub fn others_of_joint(&self, player: usize, joint: usize) -> usize {
        let a = self.decode_joint(joint);
        a.iter()
            .enumerate()
            .filter(|(j, _)| *j != player)
            .fold(0, |acc, (j, x)| acc * self.actions[j].len() + x)
    }

    /// Joint index combining own action `own` and opponent index `others`.
    pub fn join_actions(&self, player: usize, own: usize, others: usize) -> usize {
        let mut a = self.decode_others(player, others);
        a[player] = own;
        self.encode_joint(&a)
    }

    /// Players with more than one feasible action.
    pub fn movers(&self) -> Vec<usize> {
        (0..self.actions.len())
            .filter(|&i| self.actions[i].len() > 1)
            .collect()
    }
}

/// Read-only view of a history handed to builder callbacks.
#[derive(Debug, Clone)]
pub struct HistoryView<'a> {
    pub stage: usize,
    pub index_in_stage: usize,
    /// Stage action profiles as labels.
    pub path: &'a [Vec<String>],
}

/// Immutable multi-stage game with observed actions.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    name: String,
    types: TypeSpace,
    prior: Vec<Rational>,
    prior_f64: Vec<f64>,
    horizon: usize,
    histories: Vec<History>,
    stage_start: Vec<usize>,
    terminals: Vec<HistoryId>,
    payoffs: Vec<Rational>,
    payoffs_f64: Vec<f64>,
}

impl Game {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn players(&self) -> usize {
        self.types.players()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn types(&self) -> &TypeSpace {
        &self.types
    }

    pub fn histories(&self) -> &[History] {
        &self.histories
    }

    pub fn history(&self, id: HistoryId) -> &History {
        &self.histories[id]
    }

    pub fn root(&self) -> HistoryId {
        0
    }

    pub fn terminals(&self) -> &[HistoryId] {
        &self.terminals
    }

    /// Histories of stage `t` (`t = 0` is the root, `t = T` terminal).
    pub fn stage(&self, t: usize) -> std::ops::Range<HistoryId> {
        self.stage_start[t]..self.stage_start[t + 1]
    }

    pub fn non_terminal(&self) -> std::ops::Range<HistoryId> {
        0..self.stage_start[self.horizon]
    }

    pub fn prior_exact(&self) -> &[Rational] {
        &self.prior
    }

    pub fn prior<S: Scalar>(&self, profile: usize) -> S {
        S::pick(&self.prior[profile], self.prior_f64[profile])
    }

    /// `F(θ_{-i} | θ_i)` indexed by `θ_{-i}`.
    pub fn conditional_prior<S: Scalar>(&self, player: usize, own: usize) -> Vec<S> {
        let k = self.types.others_count(player);
        let joint: Vec<S> = (0..k)
            .map(|o| self.prior(self.types.join(player, own, o)))
            .collect();
        let total = joint.iter().fold(S::zero(), |acc, x| acc + x.clone());
        joint.into_iter().map(|x| x / total.clone()).collect()
    }

    /// Marginal `F(θ_i)`.
    pub fn marginal<S: Scalar>(&self, player: usize, own: usize) -> S {
        (0..self.types.others_count(player))
            .map(|o| self.prior::<S>(self.types.join(player, own, o)))
            .fold(S::zero(), |acc, x| acc + x)
    }

    pub fn payoff<S: Scalar>(&self, terminal: HistoryId, profile: usize, player: usize) -> S {
        let idx = self.payoff_index(terminal, profile, player);
        S::pick(&self.payoffs[idx], self.payoffs_f64[idx])
    }

    pub fn payoff_exact(&self, terminal: HistoryId, profile: usize, player: usize) -> &Rational {
        &self.payoffs[self.payoff_index(terminal, profile, player)]
    }

    fn payoff_index(&self, terminal: HistoryId, profile: usize, player: usize) -> usize {
        let t = self.histories[terminal]
            .terminal
            .expect("payoffs are only defined at terminal histories");
        (t * self.types.count() + profile) * self.players() + player
    }

    /// Stage action profiles from the root to `id`, as action indices.
    pub fn path(&self, id: HistoryId) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = id;
        while let Some(p) = self.histories[cur].parent {
            out.push(self.histories[cur].last.clone());
            cur = p;
        }
        out.reverse();
        out
    }

    /// Ancestor of `id` at `stage` (itself when `stage` equals its stage).
    pub fn ancestor(&self, id: HistoryId, stage: usize) -> HistoryId {
        let mut cur = id;
        while self.histories[cur].stage > stage {
            cur = self.histories[cur].parent.expect("non-root history has a parent");
        }
        cur
    }

    /// `a ⪯ b`.
    pub fn precedes_eq(&self, a: HistoryId, b: HistoryId) -> bool {
        let sa = self.histories[a].stage;
        self.histories[b].stage >= sa && self.ancestor(b, sa) == a
    }

    /// Label tuples along the path to `id`.
    pub fn label_path(&self, id: HistoryId) -> Vec<Vec<String>> {
        let mut out = Vec::new();
        let mut cur = id;
        while let Some(p) = self.histories[cur].parent {
            let parent = &self.histories[p];
            out.push(
                self.histories[cur]
                    .last
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| parent.actions[i][a].clone())
                    .collect(),
            );
            cur = p;
        }
        out.reverse();
        out
    }

    /// Canonical path text. Each step is the label of the single mover when
    /// exactly one player has a non-singleton action set, else a full tuple.
    /// The root is the empty string.
    pub fn history_string(&self, id: HistoryId) -> String {
        let mut steps = Vec::new();
        let mut cur = id;
        while let Some(p) = self.histories[cur].parent {
            let parent = &self.histories[p];
            let last = &self.histories[cur].last;
            let movers = parent.movers();
            let step = if movers.len() == 1 {
                parent.actions[movers[0]][last[movers[0]]].clone()
            } else {
                let labels: Vec<&str> = last
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| parent.actions[i][a].as_str())
                    .collect();
                format!("({})", labels.join(","))
            };
            steps.push(step);
            cur = p;
        }
        steps.reverse();
        steps.join(" ")
    }

    pub fn display_history(&self, id: HistoryId) -> String {
        let s = self.history_string(id);
        if s.is_empty() {
            "∅".to_string()
        } else {
            s
        }
    }

    /// Child of `id` reached by the given label tuple.
    pub fn child_by_labels(&self, id: HistoryId, labels: &[&str]) -> Option<HistoryId> {
        let h = &self.histories[id];
        if labels.len() != self.players() || h.is_terminal() {
            return None;
        }
        let idx: Option<Vec<usize>> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| h.actions[i].iter().position(|x| x == l))
            .collect();
        idx.map(|a| h.children[h.encode_joint(&a)])
    }

    /// Resolves one path step: a full tuple, or a bare label naming the
    /// action of the only player for whom it is a feasible action while all
    /// other players have singleton sets.
    pub fn resolve_step(&self, id: HistoryId, step: &[String]) -> Option<HistoryId> {
        let h = &self.histories[id];
        if h.is_terminal() {
            return None;
        }
        if step.len() == self.players() {
            let labels: Vec<&str> = step.iter().map(String::as_str).collect();
            if let Some(c) = self.child_by_labels(id, &labels) {
                return Some(c);
            }
        }
        if step.len() != 1 {
            return None;
        }
        let label = &step[0];
        let mut found = None;
        for i in 0..self.players() {
            if let Some(a) = h.actions[i].iter().position(|x| x == label) {
                let others_singleton = (0..self.players())
                    .all(|j| j == i || h.actions[j].len() == 1);
                if !others_singleton {
                    continue;
                }
                let mut joint = vec![0; self.players()];
                joint[i] = a;
                let child = h.children[h.encode_joint(&joint)];
                match found {
                    None => found = Some(child),
                    Some(prev) if prev == child => {}
                    Some(_) => return None,
                }
            }
        }
        found
    }

    /// Looks up a history from its path steps.
    pub fn find_history(&self, steps: &[Vec<String>]) -> Option<HistoryId> {
        steps
            .iter()
            .try_fold(self.root(), |cur, step| self.resolve_step(cur, step))
    }

    /// Parses the canonical path text produced by [`Game::history_string`].
    pub fn parse_history(&self, text: &str) -> Option<HistoryId> {
        let t = text.trim();
        if t.is_empty() || t == "∅" || t == "-" {
            return Some(self.root());
        }
        self.find_history(&split_path(t)?)
    }

    /// Whether no player ever has more than one action (pure chance game).
    pub fn is_complete_information(&self) -> bool {
        self.types.count() == 1
    }
}

/// Splits path text like `A (x,y) L` into steps.
pub fn split_path(text: &str) -> Option<Vec<Vec<String>>> {
    let mut steps = Vec::new();
    let mut chars = text.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        match chars.peek() {
            None => break,
            Some('(') => {
                chars.next();
                let mut inner = String::new();
                loop {
                    match chars.next() {
                        Some(')') => break,
                        Some(c) => inner.push(c),
                        None => return None,
                    }
                }
                steps.push(inner.split(',').map(|s| s.trim().to_string()).collect());
            }
            Some(_) => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                steps.push(vec![word]);
            }
        }
    }
    Some(steps)
}

/// Builder that materializes the history tree from callbacks.
pub struct GameBuilder {
    name: String,
    types: TypeSpace,
    prior: Vec<Rational>,
    horizon: usize,
}

impl GameBuilder {
    /// `prior` is indexed by type-profile index (see [`TypeSpace::encode`]).
    pub fn new(
        name: impl Into<String>,
        type_labels: Vec<Vec<String>>,
        prior: Vec<Rational>,
        horizon: usize,
    ) -> Self {
        GameBuilder {
            name: name.into(),
            types: TypeSpace::new(type_labels),
            prior,
            horizon,
        }
    }

    pub fn types(&self) -> &TypeSpace {
        &self.types
    }

    pub fn build<A, P>(self, mut actions: A, mut payoffs: P) -> Result<Game, GameError>
    where
        A: FnMut(usize, &HistoryView) -> Result<Vec<String>, GameError>,
        P: FnMut(&[usize], &HistoryView) -> Result<Vec<Rational>, GameError>,
    {
        let n = self.types.players();
        if n == 0 {
            return Err(GameError::Invalid("a game needs at least one player".into()));
        }
        if self.horizon == 0 {
            return Err(GameError::Invalid("horizon must be at least 1".into()));
        }
        if (0..n).any(|i| self.types.count_of(i) == 0) {
            return Err(GameError::Invalid("every player needs at least one type".into()));
        }
        if self.prior.len() != self.types.count() {
            return Err(GameError::Invalid(format!(
                "prior has {} entries for {} type profiles",
                self.prior.len(),
                self.types.count()
            )));
        }
        for (k, p) in self.prior.iter().enumerate() {
            if *p <= Rational::zero() {
                return Err(GameError::PriorNotFullSupport(self.types.describe(k)));
            }
        }
        let total = self.prior.iter().fold(Rational::zero(), |a, b| a + b);
        if !total.is_one() {
            return Err(GameError::PriorNotNormalized(format_rational(&total)));
        }

        let mut histories = vec![History {
            id: 0,
            stage: 0,
            parent: None,
            last: Vec::new(),
            index_in_stage: 0,
            actions: Vec::new(),
            children: Vec::new(),
            terminal: None,
        }];
        let mut paths: Vec<Vec<Vec<String>>> = vec![Vec::new()];
        let mut stage_start = vec![0];
        let mut frontier = 0..1;
        for stage in 0..self.horizon {
            let next_start = histories.len();
            stage_start.push(next_start);
            for id in frontier.clone() {
                let view = HistoryView {
                    stage,
                    index_in_stage: histories[id].index_in_stage,
                    path: &paths[id],
                };
                let mut sets = Vec::with_capacity(n);
                for i in 0..n {
                    let set = actions(i, &view)?;
                    if set.is_empty() {
                        return Err(GameError::EmptyActionSet {
                            player: i + 1,
                            history: path_text(&paths[id]),
                        });
                    }
                    for (a, l) in set.iter().enumerate() {
                        if set[..a].contains(l) {
                            return Err(GameError::Invalid(format!(
                                "duplicate action `{l}` for player {} at {}",
                                i + 1,
                                path_text(&paths[id])
                            )));
                        }
                    }
                    sets.push(set);
                }
                let joint: usize = sets.iter().map(Vec::len).product();
                if histories.len() + joint > MAX_HISTORIES {
                    return Err(GameError::Invalid(format!(
                        "game tree exceeds {MAX_HISTORIES} histories"
                    )));
                }
                let mut children = Vec::with_capacity(joint);
                for j in 0..joint {
                    let mut rest = j;
                    let mut last = vec![0; n];
                    for i in (0..n).rev() {
                        last[i] = rest % sets[i].len();
                        rest /= sets[i].len();
                    }
                    let child = histories.len();
                    let mut path = paths[id].clone();
                    path.push(last.iter().enumerate().map(|(i, &a)| sets[i][a].clone()).collect());
                    histories.push(History {
                        id: child,
                        stage: stage + 1,
                        parent: Some(id),
                        last,
                        index_in_stage: child - next_start,
                        actions: Vec::new(),
                        children: Vec::new(),
                        terminal: None,
                    });
                    paths.push(path);
                    children.push(child);
                }
                histories[id].actions = sets;
                histories[id].children = children;
            }
            frontier = next_start..histories.len();
        }
        stage_start.push(histories.len());

        let terminals: Vec<HistoryId> = frontier.collect();
        let mut payoff_table = Vec::with_capacity(terminals.len() * self.types.count() * n);
        for (t, &id) in terminals.iter().enumerate() {
            histories[id].terminal = Some(t);
            let view = HistoryView {
                stage: self.horizon,
                index_in_stage: histories[id].index_in_stage,
                path: &paths[id],
            };
            for k in 0..self.types.count() {
                let types = self.types.decode(k);
                let u = payoffs(&types, &view)?;
                if u.len() != n {
                    return Err(GameError::Invalid(format!(
                        "payoff vector at ({}, {}) has {} entries, expected {n}",
                        self.types.describe(k),
                        path_text(&paths[id]),
                        u.len()
                    )));
                }
                payoff_table.extend(u);
            }
        }
        let payoffs_f64 = payoff_table.iter().map(rational_to_f64).collect();
        let prior_f64 = self.prior.iter().map(rational_to_f64).collect();
        Ok(Game {
            name: self.name,
            types: self.types,
            prior: self.prior,
            prior_f64,
            horizon: self.horizon,
            histories,
            stage_start,
            terminals,
            payoffs: payoff_table,
            payoffs_f64,
        })
    }
}

/// Full-tuple path text used in diagnostics.
pub fn path_text(path: &[Vec<String>]) -> String {
    if path.is_empty() {
        return "∅".into();
    }
    path.iter()
        .map(|s| format!("({})", s.join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn type_space_indexing() {
        let ts = TypeSpace::new(vec![labels(&["a", "b"]), labels(&["-"]), labels(&["x", "y", "z"])]);
        assert_eq!(ts.count(), 6);
        for k in 0..6 {
            assert_eq!(ts.encode(&ts.decode(k)), k);
            for i in 0..3 {
                let own = ts.type_of(k, i);
                assert_eq!(ts.join(i, own, ts.others_index(i, k)), k);
            }
        }
        assert_eq!(ts.others_count(2), 2);
        assert_eq!(ts.typed_players(), vec![0, 2]);
    }

    #[test]
    fn degenerate_game_has_one_terminal() {
        let g = GameBuilder::new("one", vec![labels(&["-"])], vec![int(1)], 1)
            .build(|_, _| Ok(labels(&["go"])), |_, _| Ok(vec![int(3)]))
            .unwrap();
        assert_eq!(g.terminals().len(), 1);
        assert_eq!(g.payoff::<f64>(g.terminals()[0], 0, 0), 3.0);
        assert_eq!(g.history_string(g.terminals()[0]), "(go)");
    }

    #[test]
    fn prior_validation() {
        let ts = vec![labels(&["a", "b"])];
        let err = GameBuilder::new("g", ts.clone(), vec![ratio(1, 2), ratio(2, 5)], 1)
            .build(|_, _| Ok(labels(&["x"])), |_, _| Ok(vec![int(0)]))
            .unwrap_err();
        assert_eq!(err, GameError::PriorNotNormalized("9/10".into()));
        let err = GameBuilder::new("g", ts, vec![int(1), int(0)], 1)
            .build(|_, _| Ok(labels(&["x"])), |_, _| Ok(vec![int(0)]))
            .unwrap_err();
        assert!(matches!(err, GameError::PriorNotFullSupport(_)));
    }

    #[test]
    fn empty_action_set_is_rejected() {
        let err = GameBuilder::new("g", vec![labels(&["-"])], vec![int(1)], 1)
            .build(|_, _| Ok(vec![]), |_, _| Ok(vec![int(0)]))
            .unwrap_err();
        assert!(matches!(err, GameError::EmptyActionSet { player: 1, .. }));
    }
}
