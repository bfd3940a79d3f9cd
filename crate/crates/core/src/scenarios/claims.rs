//! Claim harnesses: run an engine over a grid and compare each verdict with
//! the closed-form prediction.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cse::{check_cse, CseOptions};
use crate::error::ScenarioError;
use crate::game::Game;
use crate::one_stage::{enumerate_pure, Concept};
use crate::profile::{format_shorthand, parse_shorthand, Profile, PureSpace};
use crate::scalar::{format_rational, int, parse_rational, ratio, Rational};
use crate::sce::{check_sce, SceOptions};

use super::cutoffs::{cutoff_cse, cutoff_sce, engine_cutoff_cse, engine_cutoff_sce};
use super::games::{matching_game, perfect_info_game, signaling_game};

pub const CLAIM_IDS: [&str; 8] = ["C3", "C4", "C5", "C6", "C7", "C8", "C11", "ci_cse"];

/// One engine run against its prediction.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimCheck {
    pub point: String,
    pub case: String,
    pub engine: String,
    pub predicted: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub claim: String,
    pub statement: String,
    pub grid: Vec<String>,
    pub checks: Vec<ClaimCheck>,
    pub mismatches: Vec<ClaimCheck>,
    pub passed: bool,
    #[serde(skip)]
    pub runtime_ms: u128,
}

impl ClaimReport {
    fn new(claim: &str, statement: &str, grid: Vec<String>, checks: Vec<ClaimCheck>, start: Instant) -> Self {
        let mismatches: Vec<ClaimCheck> = checks.iter().filter(|c| !c.ok).cloned().collect();
        ClaimReport {
            claim: claim.into(),
            statement: statement.into(),
            grid,
            passed: mismatches.is_empty() && !checks.is_empty(),
            checks,
            mismatches,
            runtime_ms: start.elapsed().as_millis(),
        }
    }
}

fn check(point: String, case: impl Into<String>, engine: impl ToString, predicted: impl ToString) -> ClaimCheck {
    let (engine, predicted) = (engine.to_string(), predicted.to_string());
    ClaimCheck { point, case: case.into(), ok: engine == predicted, engine, predicted }
}

fn r(s: &str) -> Rational {
    parse_rational(s).expect("literal")
}

fn show(x: &Rational) -> String {
    format_rational(x)
}

/// Default grid of the claim's main parameter.
pub fn default_grid(id: &str) -> Result<Vec<Rational>, ScenarioError> {
    let v: &[&str] = match id {
        "C3" => &["0", "1/3", "3/5", "2/3", "4/5", "1"],
        "C4" => &["0", "1/2", "2/3", "7/10", "4/5", "81/100", "41/50", "9/10", "1"],
        "C5" => &["0", "1/3", "2/3", "8/9", "9/10", "1"],
        "C6" | "C8" => &["0", "1/5", "1/3", "1/2", "2/3", "8/9", "9/10", "1"],
        "C7" => &["0", "49/100", "1/2", "51/100", "1"],
        "C11" => &["1/20", "1/10", "1/6", "1/5", "2/5"],
        "ci_cse" => &["0", "1/3", "1/2", "8/9", "1"],
        _ => return Err(ScenarioError::UnknownClaim(id.into())),
    };
    Ok(v.iter().map(|s| r(s)).collect())
}

/// Runs the harness of claim `id` over `grid` (the default grid if `None`).
pub fn verify_claim(id: &str, grid: Option<&[Rational]>) -> Result<ClaimReport, ScenarioError> {
    let default = default_grid(id)?;
    let grid = grid.unwrap_or(&default);
    let start = Instant::now();
    let labels: Vec<String> = grid.iter().map(show).collect();
    let (statement, checks) = match id {
        "C3" => ("SCE cutoff is 1 iff chi_s(1-psi_s) <= 2a/(1+a)", claim3(grid)?),
        "C4" => ("CSE cutoff is the smallest i with chi <= (2a/(1+a))^(1/i)", claim4(grid)?),
        "C5" => ("pure CSE of the signaling game: (A,A);(L,R) always, (B,B);(R,R) iff chi <= 8/9", claim5(grid)?),
        "C6" => ("four pure SCE of the unscrambled signaling game", claim6(grid, false)?),
        "C7" => ("[R;(b,r)] is an SCE iff chi_s >= 1/2 for every x and y < 1", claim7(grid)?),
        "C8" => ("two pure pooling SCE of the scrambled signaling game", claim6(grid, true)?),
        "C11" => ("CE picks b or r for player 3 iff eps <= 1/6; ICE always picks m", claim11(grid)?),
        "ci_cse" => ("with one type profile, CSE verdicts do not depend on chi", claim_ci(grid)?),
        _ => return Err(ScenarioError::UnknownClaim(id.into())),
    };
    Ok(ClaimReport::new(id, statement, labels, checks, start))
}

fn psi_axis() -> Vec<Rational> {
    vec![int(0), ratio(1, 2), int(1)]
}

fn claim3(grid: &[Rational]) -> Result<Vec<ClaimCheck>, ScenarioError> {
    let alpha = ratio(1, 2);
    let points: Vec<(usize, Rational, Rational)> = [2usize, 3]
        .iter()
        .flat_map(|&n| grid.iter().flat_map(move |c| psi_axis().into_iter().map(move |p| (n, c.clone(), p))))
        .collect();
    points
        .par_iter()
        .map(|(n, c, p)| {
            let e = engine_cutoff_sce(&alpha, c, p, *n)?;
            let point = format!("n={n},alpha=1/2,chi_s={},psi_s={}", show(c), show(p));
            Ok(vec![
                check(point.clone(), "cutoff", e.cutoff, cutoff_sce(&alpha, c, p)),
                check(point, "all listeners agree", e.risky.iter().all(|&x| x == e.risky[0]), true),
            ])
        })
        .collect::<Result<Vec<_>, ScenarioError>>()
        .map(|v| v.into_iter().flatten().collect())
}

fn claim4(grid: &[Rational]) -> Result<Vec<ClaimCheck>, ScenarioError> {
    let alpha = ratio(1, 2);
    let mut points: Vec<(usize, Rational)> = grid.iter().map(|c| (2, c.clone())).collect();
    points.extend(grid.iter().map(|c| (5, c.clone())));
    points.push((10, ratio(9, 10)));
    points
        .par_iter()
        .map(|(n, c)| {
            let e = engine_cutoff_cse(&alpha, c, *n)?;
            let point = format!("n={n},alpha=1/2,chi={},listeners_run={}", show(c), e.listeners);
            Ok(vec![
                check(point.clone(), "cutoff", e.cutoff, cutoff_cse(&alpha, c, *n)),
                check(point, "monotone switch", e.monotone(), true),
            ])
        })
        .collect::<Result<Vec<_>, ScenarioError>>()
        .map(|v| v.into_iter().flatten().collect())
}

/// Every pure profile of `game` as shorthand, in enumeration order.
fn pure_profiles(game: &Game) -> Vec<(String, Profile<Rational>)> {
    let space = PureSpace::new(game);
    (0..space.total() as usize)
        .map(|k| {
            let s: Profile<Rational> = space.nth(game, k);
            (format_shorthand(game, &s).expect("pure"), s)
        })
        .collect()
}

fn set_text(set: &BTreeSet<String>) -> String {
    format!("{{{}}}", set.iter().cloned().collect::<Vec<_>>().join(" "))
}

/// Compares the full set of pure equilibria with the predicted set.
fn set_check(point: String, game: &Game, predicted: &[&str], holds: impl Fn(&Profile<Rational>) -> Result<bool, ScenarioError> + Sync) -> Result<ClaimCheck, ScenarioError> {
    let all = pure_profiles(game);
    let found: Vec<Option<String>> = all
        .par_iter()
        .map(|(name, s)| Ok(holds(s)?.then(|| name.clone())))
        .collect::<Result<_, ScenarioError>>()?;
    let found: BTreeSet<String> = found.into_iter().flatten().collect();
    let predicted: BTreeSet<String> = predicted
        .iter()
        .map(|p| format_shorthand(game, &parse_shorthand(game, p).expect("claim profile")).expect("pure"))
        .collect();
    Ok(check(point, "pure equilibrium set", set_text(&found), set_text(&predicted)))
}

fn claim5(grid: &[Rational]) -> Result<Vec<ClaimCheck>, ScenarioError> {
    let game = signaling_game(false);
    grid.iter()
        .map(|chi| {
            let mut predicted = vec!["[(A,A);(L,R)]"];
            if *chi <= ratio(8, 9) {
                predicted.push("[(B,B);(R,R)]");
            }
            set_check(format!("chi={}", show(chi)), &game, &predicted, |s| {
                Ok(check_cse(&game, s, chi, None, &CseOptions::default())?.equilibrium)
            })
        })
        .collect()
}

fn claim6(grid: &[Rational], scrambled: bool) -> Result<Vec<ClaimCheck>, ScenarioError> {
    let game = signaling_game(scrambled);
    let mut out = Vec::new();
    for chi in grid {
        for psi in psi_axis() {
            let k = chi.clone() * (int(1) - psi.clone());
            let third = ratio(1, 3);
            let mut predicted = Vec::new();
            if scrambled {
                predicted.push("[(A,A);(L,R')]");
                if k <= ratio(8, 9) {
                    predicted.push("[(B,B);(R,R')]");
                }
            } else {
                if *chi <= third {
                    predicted.push("[(A,A);(L,R)]");
                }
                if *chi >= third {
                    predicted.push("[(B,B);(L,R)]");
                }
                if *chi == third {
                    predicted.push("[(B,A);(L,R)]");
                }
                if k <= ratio(8, 9) {
                    predicted.push("[(B,B);(R,R)]");
                }
            }
            let point = format!("chi_s={},psi_s={}", show(chi), show(&psi));
            out.push(set_check(point, &game, &predicted, |s| {
                Ok(check_sce(&game, s, chi, &psi, &SceOptions::default())?.verdict.equilibrium)
            })?);
            if scrambled {
                // the scrambled SCE set equals the CSE set at chi = chi_s(1-psi_s)
                let cse: BTreeSet<String> = pure_profiles(&game)
                    .into_iter()
                    .filter(|(_, s)| check_cse(&game, s, &k, None, &CseOptions::default()).is_ok_and(|v| v.equilibrium))
                    .map(|(n, _)| n)
                    .collect();
                let sce: BTreeSet<String> = pure_profiles(&game)
                    .into_iter()
                    .filter(|(_, s)| check_sce(&game, s, chi, &psi, &SceOptions::default()).is_ok_and(|v| v.verdict.equilibrium))
                    .map(|(n, _)| n)
                    .collect();
                out.push(check(format!("chi_s={},psi_s={}", show(chi), show(&psi)), "equals CSE set", set_text(&sce), set_text(&cse)));
            }
        }
    }
    Ok(out)
}

fn claim7(grid: &[Rational]) -> Result<Vec<ClaimCheck>, ScenarioError> {
    let mut out = Vec::new();
    for x in [int(-1_000_000), int(0), int(10)] {
        for y in [int(-1_000_000), ratio(1, 2)] {
            let game = perfect_info_game(&x, &y)?;
            let sigma = parse_shorthand(&game, "[R;(b,r)]").expect("claim profile");
            for chi in grid {
                for psi in psi_axis() {
                    let v = check_sce(&game, &sigma, chi, &psi, &SceOptions::default())?;
                    let point = format!("x={},y={},chi_s={},psi_s={}", show(&x), show(&y), show(chi), show(&psi));
                    out.push(check(point, "[R;(b,r)] is an SCE", v.verdict.equilibrium, *chi >= ratio(1, 2)));
                }
            }
        }
    }
    Ok(out)
}

fn claim11(grid: &[Rational]) -> Result<Vec<ClaimCheck>, ScenarioError> {
    let mut out = Vec::new();
    let labels = ["b", "r", "m"];
    for eps in grid {
        let game = matching_game(eps)?;
        let point = format!("eps={}", show(eps));
        let sixth = ratio(1, 6);
        let ce_pred: BTreeSet<&str> = if *eps < sixth {
            ["b", "r"].into()
        } else if *eps == sixth {
            ["b", "r", "m"].into()
        } else {
            ["m"].into()
        };
        for (name, concept, pred) in [
            ("CE", Concept::Ce(int(1)), ce_pred),
            ("ICE", Concept::Ice, ["m"].into()),
        ] {
            let eq = enumerate_pure(&game, &concept)?;
            let root = game.root();
            let a3: BTreeSet<&str> = eq.iter().map(|s| labels[s.pure_action(2, 0, root).expect("pure")]).collect();
            let truthful = eq
                .iter()
                .all(|s| (0..2).all(|i| (0..2).all(|t| s.pure_action(i, t, root) == Some(t))));
            out.push(check(point.clone(), format!("{name} player 3 actions"), format!("{a3:?}"), format!("{pred:?}")));
            out.push(check(point.clone(), format!("{name} players 1 and 2 match their types"), truthful && !eq.is_empty(), true));
        }
    }
    Ok(out)
}

fn claim_ci(grid: &[Rational]) -> Result<Vec<ClaimCheck>, ScenarioError> {
    let mut out = Vec::new();
    for (x, y) in [(int(0), ratio(1, 2)), (int(-1_000_000), int(-1_000_000)), (int(10), ratio(1, 2))] {
        let game = perfect_info_game(&x, &y)?;
        for chi in grid {
            let point = format!("x={},y={},chi={}", show(&x), show(&y), show(chi));
            out.push(set_check(point, &game, &["[B;(b,r)]"], |s| {
                Ok(check_cse(&game, s, chi, None, &CseOptions::default())?.equilibrium)
            })?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_claim() {
        assert!(matches!(verify_claim("C99", None), Err(ScenarioError::UnknownClaim(_))));
    }

    #[test]
    fn signaling_claims_pass() {
        for id in ["C5", "C7", "ci_cse"] {
            let rep = verify_claim(id, None).unwrap();
            assert!(rep.passed, "{id}: {:?}", rep.mismatches);
        }
    }
}
