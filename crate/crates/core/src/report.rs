//! JSON reports of equilibrium checks.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::cse::Verdict;
use crate::game::Game;
use crate::one_stage::OneStageVerdict;
use crate::profile::{format_shorthand, profile_to_json, BeliefSystem, Profile};
use crate::scalar::{Rational, Scalar};
use crate::sce::SceVerdict;

/// Exact values become `"p/q"` strings, floats stay numbers.
pub fn scalar_json<S: Scalar>(x: &S) -> Value {
    if S::EXACT {
        Value::String(x.to_string())
    } else {
        serde_json::Number::from_f64(x.to_f64()).map_or(Value::Null, Value::Number)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BeliefEntry {
    pub player: usize,
    #[serde(rename = "type")]
    pub own: String,
    pub history: String,
    pub belief: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub player: usize,
    #[serde(rename = "type")]
    pub own: String,
    pub history: String,
    pub slack: Value,
    pub values: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumReport {
    pub concept: String,
    pub game: String,
    pub profile: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shorthand: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_s: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_s: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition_phc: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forced_phc: Option<bool>,
    pub verdict: bool,
    pub worst_slack: Value,
    pub beliefs: Vec<BeliefEntry>,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tremble_family: Option<String>,
    pub notes: Vec<String>,
}

impl EquilibriumReport {
    fn base(concept: &str, game: &Game, profile: &Profile<Rational>) -> Self {
        EquilibriumReport {
            concept: concept.into(),
            game: game.name().into(),
            profile: profile_to_json(game, profile),
            shorthand: format_shorthand(game, profile),
            chi: None,
            chi_s: None,
            psi_s: None,
            partition_phc: None,
            forced_phc: None,
            verdict: false,
            worst_slack: Value::Null,
            beliefs: Vec::new(),
            witnesses: Vec::new(),
            tremble_family: None,
            notes: Vec::new(),
        }
    }

    fn fill<S: Scalar>(&mut self, game: &Game, v: &Verdict<S>) {
        self.verdict = v.equilibrium;
        self.worst_slack = scalar_json(&v.worst_slack);
        self.beliefs = belief_entries(game, &v.beliefs);
        self.witnesses = v
            .violations
            .iter()
            .map(|x| Witness {
                player: x.player + 1,
                own: game.types().label(x.player, x.own).into(),
                history: game.display_history(x.history),
                slack: scalar_json(&x.slack),
                values: action_map(&game.history(x.history).actions[x.player], &x.values),
            })
            .collect();
        self.tremble_family = v.family.as_ref().map(|f| f.describe(game));
        self.notes = v.notes.clone();
    }

    pub fn cse<S: Scalar>(game: &Game, profile: &Profile<Rational>, chi: &S, v: &Verdict<S>) -> Self {
        let mut r = Self::base("cse", game, profile);
        r.chi = Some(scalar_json(chi));
        r.fill(game, v);
        r
    }

    pub fn sce<S: Scalar>(game: &Game, profile: &Profile<Rational>, chi_s: &S, psi_s: &S, v: &SceVerdict<S>) -> Self {
        let mut r = Self::base("sce", game, profile);
        r.chi_s = Some(scalar_json(chi_s));
        r.psi_s = Some(scalar_json(psi_s));
        r.partition_phc = Some(v.partition_phc);
        r.forced_phc = Some(v.forced_phc);
        r.fill(game, &v.verdict);
        r.notes.push("own continuation play is optimized within the perceived model".into());
        r
    }

    pub fn one_stage<S: Scalar>(
        concept: &str,
        game: &Game,
        profile: &Profile<Rational>,
        chi: Option<&S>,
        v: &OneStageVerdict<S>,
    ) -> Self {
        let mut r = Self::base(concept, game, profile);
        r.chi = chi.map(scalar_json);
        r.verdict = v.equilibrium;
        r.worst_slack = scalar_json(&v.worst_slack);
        let root = game.root();
        for row in &v.rows {
            let actions = &game.history(root).actions[row.player];
            if !row.best_response {
                let best = row.values.iter().cloned().reduce(|a, b| if b > a { b } else { a }).expect("non-empty");
                let worst = row
                    .values
                    .iter()
                    .zip(profile.dist(row.player, row.own, root))
                    .filter(|(_, p)| !num_traits::Zero::is_zero(*p))
                    .map(|(v, _)| best.clone() - v.clone())
                    .reduce(|a, b| if b > a { b } else { a })
                    .unwrap_or_else(S::zero);
                r.witnesses.push(Witness {
                    player: row.player + 1,
                    own: game.types().label(row.player, row.own).into(),
                    history: game.display_history(root),
                    slack: scalar_json(&worst),
                    values: action_map(actions, &row.values),
                });
            }
            if row.argmax.len() > 1 {
                let tied: Vec<&str> = row.argmax.iter().map(|&a| actions[a].as_str()).collect();
                r.notes.push(format!(
                    "tie for player {} type {}: {}",
                    row.player + 1,
                    game.types().label(row.player, row.own),
                    tied.join(", ")
                ));
            }
        }
        r
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn action_map<S: Scalar>(labels: &[String], values: &[S]) -> BTreeMap<String, Value> {
    labels.iter().cloned().zip(values.iter().map(scalar_json)).collect()
}

/// Beliefs at every non-terminal history for players facing uncertainty.
pub fn belief_entries<S: Scalar>(game: &Game, beliefs: &BeliefSystem<S>) -> Vec<BeliefEntry> {
    let ts = game.types();
    let mut out = Vec::new();
    for i in 0..game.players() {
        if ts.others_count(i) < 2 {
            continue;
        }
        for own in 0..ts.count_of(i) {
            for h in game.non_terminal() {
                let belief = beliefs
                    .get(i, own, h)
                    .iter()
                    .enumerate()
                    .map(|(t, p)| (others_label(game, i, own, t), scalar_json(p)))
                    .collect();
                out.push(BeliefEntry {
                    player: i + 1,
                    own: ts.label(i, own).into(),
                    history: game.display_history(h),
                    belief,
                });
            }
        }
    }
    out
}

fn others_label(game: &Game, i: usize, own: usize, t: usize) -> String {
    let ts = game.types();
    let prof = ts.join(i, own, t);
    (0..game.players())
        .filter(|&j| j != i && ts.count_of(j) > 1)
        .map(|j| ts.label(j, ts.type_of(prof, j)).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cse::{check_cse, CseOptions};
    use crate::dsl::{parse_game, SIGNALING_FIXTURE};
    use crate::profile::parse_shorthand;
    use crate::scalar::ratio;

    #[test]
    fn cse_report_lists_witnesses() {
        let g = parse_game(SIGNALING_FIXTURE).unwrap();
        let s = parse_shorthand(&g, "[(B,B);(R,R)]").unwrap();
        let chi = ratio(9, 10);
        let v = check_cse(&g, &s, &chi, None, &CseOptions::default()).unwrap();
        let j = EquilibriumReport::cse(&g, &s, &chi, &v).to_json();
        assert_eq!(j["verdict"], Value::Bool(false));
        assert_eq!(j["chi"], Value::String("9/10".into()));
        assert!(!j["witnesses"].as_array().unwrap().is_empty());
        assert_eq!(j["shorthand"], Value::String("[(B,B);(R,R)]".into()));
    }
}
