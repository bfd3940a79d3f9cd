//! Equilibrium regions over a parameter grid.

use rayon::prelude::*;

use crate::cse::{check_cse, CseOptions};
use crate::error::ScenarioError;
use crate::game::Game;
use crate::partition::coarsest_valid_partition;
use crate::profile::Profile;
use crate::scalar::{format_rational, int, ratio, Rational, Scalar};
use crate::sce::{contexts, holds};

/// Grid of `n` evenly spaced points on `[0,1]` with `extra` points merged in.
pub fn axis(n: usize, extra: &[Rational]) -> Vec<Rational> {
    let mut v: Vec<Rational> = if n < 2 {
        vec![int(0)]
    } else {
        (0..n).map(|k| ratio(k as i64, (n - 1) as i64)).collect()
    };
    v.extend(extra.iter().cloned());
    v.sort();
    v.dedup();
    v
}

/// One grid cell verdict for one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionRow {
    pub chi_s: Rational,
    pub psi_s: Rational,
    pub profile: usize,
    pub equilibrium: bool,
}

/// SCE verdicts of each profile over `chi_axis × psi_axis`. Points that lie
/// in `exact` are checked in rational arithmetic, the rest in floating
/// point.
pub fn region_map(
    game: &Game,
    profiles: &[Profile<Rational>],
    chi_axis: &[Rational],
    psi_axis: &[Rational],
    exact: impl Fn(&Rational, &Rational) -> bool + Sync,
) -> Result<Vec<RegionRow>, ScenarioError> {
    let partition = coarsest_valid_partition(game, false);
    let floats: Vec<Profile<f64>> = profiles.iter().map(|p| p.to_f64()).collect();
    let cells: Vec<(usize, usize)> = (0..chi_axis.len()).flat_map(|a| (0..psi_axis.len()).map(move |b| (a, b))).collect();
    let mut rows = Vec::new();
    for (k, (exact_profile, float_profile)) in profiles.iter().zip(&floats).enumerate() {
        let fctx = contexts(game, float_profile, &partition);
        let ectx = contexts(game, exact_profile, &partition);
        let verdicts: Vec<bool> = cells
            .par_iter()
            .map(|&(a, b)| {
                let (c, p) = (&chi_axis[a], &psi_axis[b]);
                if exact(c, p) {
                    holds(&ectx, c, p)
                } else {
                    holds(&fctx, &f64::from_rational(c), &f64::from_rational(p))
                }
            })
            .collect::<Result<_, _>>()?;
        rows.extend(cells.iter().zip(verdicts).map(|(&(a, b), eq)| RegionRow {
            chi_s: chi_axis[a].clone(),
            psi_s: psi_axis[b].clone(),
            profile: k,
            equilibrium: eq,
        }));
    }
    Ok(rows)
}

/// χ-CSE verdicts of each profile along a χ axis, exact throughout.
pub fn region_map_cse(game: &Game, profiles: &[Profile<Rational>], chi_axis: &[Rational]) -> Result<Vec<RegionRow>, ScenarioError> {
    let cells: Vec<(usize, usize)> = (0..profiles.len()).flat_map(|k| (0..chi_axis.len()).map(move |a| (k, a))).collect();
    cells
        .par_iter()
        .map(|&(k, a)| {
            let v = check_cse(game, &profiles[k], &chi_axis[a], None, &CseOptions::default())?;
            Ok(RegionRow { chi_s: chi_axis[a].clone(), psi_s: int(0), profile: k, equilibrium: v.equilibrium })
        })
        .collect()
}

/// CSV with header `chi_s,psi_s,profile_id,is_equilibrium`.
pub fn to_csv(rows: &[RegionRow], names: &[String]) -> String {
    let mut out = String::from("chi_s,psi_s,profile_id,is_equilibrium\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.chi_s.to_f64(),
            r.psi_s.to_f64(),
            names[r.profile],
            r.equilibrium
        ));
    }
    out
}

/// Boundaries on a sorted axis: the last point before and the first point
/// at which the verdict flips, for a fixed `psi_s` and profile.
pub fn flips(rows: &[RegionRow], profile: usize, psi_s: &Rational) -> Vec<(Rational, Rational)> {
    let line: Vec<&RegionRow> = rows.iter().filter(|r| r.profile == profile && &r.psi_s == psi_s).collect();
    line.windows(2)
        .filter(|w| w[0].equilibrium != w[1].equilibrium)
        .map(|w| (w[0].chi_s.clone(), w[1].chi_s.clone()))
        .collect()
}

pub fn format_point(x: &Rational) -> String {
    format_rational(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::parse_shorthand;
    use crate::scenarios::signaling_game;

    #[test]
    fn one_third_boundary_emerges() {
        let g = signaling_game(false);
        let p = vec![parse_shorthand(&g, "[(A,A);(L,R)]").unwrap()];
        let chi = axis(11, &[ratio(1, 3)]);
        let psi = vec![ratio(1, 2)];
        let rows = region_map(&g, &p, &chi, &psi, |c, _| *c == ratio(1, 3)).unwrap();
        assert_eq!(flips(&rows, 0, &ratio(1, 2)), vec![(ratio(1, 3), ratio(2, 5))]);
    }
}
