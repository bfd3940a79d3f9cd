//! Constructors for the example games.

use crate::dsl::{parse_game, SIGNALING_FIXTURE};
use crate::error::ScenarioError;
use crate::game::{Game, GameBuilder, PASS};
use crate::scalar::{format_rational, int, ratio, Rational};
use crate::scramble::scramble;

/// Two-type sender, two messages, receiver with two responses.
pub fn signaling_game(scrambled: bool) -> Game {
    let g = parse_game(SIGNALING_FIXTURE).expect("fixture parses");
    if scrambled {
        scramble(&g)
    } else {
        g
    }
}

fn zero() -> Rational {
    int(0)
}

/// Broadcaster (player 1, types `g`/`b`) announces before each of `n`
/// listeners chooses `s` or `r`. Labels carry their history, so the game is
/// scrambled as built.
pub fn broadcaster_game(n: usize, alpha: &Rational) -> Result<Game, ScenarioError> {
    if *alpha <= zero() || *alpha >= int(1) {
        return Err(ScenarioError::InvalidAlpha(format_rational(alpha)));
    }
    if n == 0 {
        return Err(ScenarioError::Game(crate::error::GameError::Invalid("broadcaster game needs a listener".into())));
    }
    let mut labels = vec![vec!["g".to_string(), "b".to_string()]];
    labels.extend((0..n).map(|_| vec!["-".to_string()]));
    let game = GameBuilder::new(format!("broadcaster_n{n}"), labels, vec![ratio(1, 2), ratio(1, 2)], 2 * n).build(
        |i, view| {
            let t = view.stage;
            let mover = if t % 2 == 0 { 0 } else { t / 2 + 1 };
            let base: &[&str] = if i != mover {
                &[PASS]
            } else if i == 0 {
                &["g", "b"]
            } else {
                &["s", "r"]
            };
            Ok(base
                .iter()
                .map(|a| format!("{a}@h{t}:{}", view.index_in_stage))
                .collect())
        },
        |types, view| {
            let truth = if types[0] == 0 { "g" } else { "b" };
            let mut u = vec![zero(); n + 1];
            for (t, step) in view.path.iter().enumerate() {
                let base = |i: usize| step[i].split('@').next().unwrap_or("").to_string();
                if t % 2 == 0 {
                    if base(0) == truth {
                        u[0] = u[0].clone() + int(1);
                    }
                } else {
                    let k = t / 2 + 1;
                    if base(k) == "r" {
                        u[k] = if types[0] == 0 { alpha.clone() } else { int(-1) };
                    }
                }
            }
            Ok(u)
        },
    )?;
    Ok(game)
}

/// Player 1 picks `B` or `R`, player 2 answers `b` or `r`.
pub fn perfect_info_game(x: &Rational, y: &Rational) -> Result<Game, ScenarioError> {
    if *y >= int(1) {
        return Err(ScenarioError::InvalidY(format_rational(y)));
    }
    let game = GameBuilder::new("perfect_info", vec![vec!["-".into()], vec!["-".into()]], vec![int(1)], 2).build(
        |i, view| {
            Ok(match (view.stage, i) {
                (0, 0) => vec!["B".into(), "R".into()],
                (1, 1) => vec!["b".into(), "r".into()],
                _ => vec![PASS.into()],
            })
        },
        |_, view| {
            let (a1, a2) = (view.path[0][0].as_str(), view.path[1][1].as_str());
            Ok(match (a1, a2) {
                ("B", "b") => vec![int(2), int(2)],
                ("B", _) => vec![zero(), zero()],
                (_, "b") => vec![x.clone(), y.clone()],
                _ => vec![int(1), int(1)],
            })
        },
    )?;
    Ok(game)
}

/// Players 1 and 2 have correlated types in `{b, r}`; player 3 guesses
/// whether their actions match.
pub fn matching_game(eps: &Rational) -> Result<Game, ScenarioError> {
    if *eps <= zero() || *eps >= ratio(1, 2) {
        return Err(ScenarioError::InvalidEpsilon(format_rational(eps)));
    }
    let same = ratio(1, 2) - eps.clone();
    let types = vec![vec!["b".to_string(), "r".to_string()], vec!["b".to_string(), "r".to_string()], vec!["-".to_string()]];
    // type profiles in mixed radix with player 1 slowest: bb, br, rb, rr
    let prior = vec![same.clone(), eps.clone(), eps.clone(), same];
    let game = GameBuilder::new("matching", types, prior, 1).build(
        |_, _| Ok(vec!["b".into(), "r".into(), "m".into()]),
        |types, view| {
            let a = &view.path[0];
            let label = |t: usize| if t == 0 { "b" } else { "r" };
            let u1 = (a[0] == label(types[0])) as i64;
            let u2 = (a[1] == label(types[1])) as i64;
            let u3 = if a[0] == a[1] { a[2] == a[0] } else { a[2] == "m" } as i64;
            Ok(vec![int(u1), int(u2), int(u3)])
        },
    )?;
    Ok(game)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::coarsest_valid_partition;
    use crate::scramble::is_scrambled;

    #[test]
    fn broadcaster_shape() {
        let g = broadcaster_game(2, &ratio(1, 2)).unwrap();
        assert_eq!(g.horizon(), 4);
        assert!(is_scrambled(&g));
        assert!(coarsest_valid_partition(&g, false).phc());
        assert_eq!(scramble(&g), g);
        assert_eq!(broadcaster_game(1, &ratio(1, 2)).unwrap().horizon(), 2);
        assert!(broadcaster_game(2, &int(1)).is_err());
    }

    #[test]
    fn example_payoffs() {
        let s = signaling_game(false);
        let t1 = s.types().encode(&[0, 0]);
        let al = s.parse_history("A L").unwrap();
        let bl = s.parse_history("B L").unwrap();
        assert_eq!(s.payoff_exact(al, t1, 0), &int(2));
        assert_eq!(s.payoff_exact(al, t1, 1), &int(2));
        assert_eq!(s.payoff_exact(bl, t1, 0), &int(4));
        assert_eq!(s.payoff_exact(bl, t1, 1), &int(-1));

        let p = perfect_info_game(&int(0), &ratio(1, 2)).unwrap();
        let bb = p.parse_history("B b").unwrap();
        let rr = p.parse_history("R r").unwrap();
        assert_eq!(p.payoff_exact(bb, 0, 0), &int(2));
        assert_eq!(p.payoff_exact(rr, 0, 1), &int(1));
        assert!(perfect_info_game(&int(0), &int(1)).is_err());

        assert!(matching_game(&int(0)).is_err());
        let m = matching_game(&ratio(1, 10)).unwrap();
        assert_eq!(m.prior_exact()[0], ratio(2, 5));
    }
}
