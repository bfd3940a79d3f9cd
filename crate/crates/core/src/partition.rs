//! Coarsest valid partition of nodes for each conjectured-about player.
//!
//! A cursed player reasons about opponent `j` only through what `j` could
//! tell apart: the labels of `j`'s feasible actions and `j`'s own past
//! moves. Nodes `(θ, h)` that agree on the sequence of `(A_j label set,
//! j's chosen label)` along the path and on the current `A_j` label set are
//! bundled. This is the coarsest grouping that still gives `j` perfect
//! recall. The key never mentions types, so every cell is a union over type
//! profiles of a set of same-stage histories, and cells are stored as sets
//! of histories.

use std::collections::HashMap;

use crate::game::{Game, HistoryId};

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// `[j][h]` → cell id, over non-terminal histories.
    cell: Vec<Vec<usize>>,
    /// `[j][cell]` → histories in the cell, in tree order.
    members: Vec<Vec<Vec<HistoryId>>>,
    phc: bool,
    forced: bool,
}

impl Partition {
    pub fn cell_of(&self, player: usize, h: HistoryId) -> usize {
        self.cell[player][h]
    }

    pub fn members(&self, player: usize, cell: usize) -> &[HistoryId] {
        &self.members[player][cell]
    }

    pub fn cell_count(&self, player: usize) -> usize {
        self.members[player].len()
    }

    /// Public history consistency: no cell spans two histories.
    pub fn phc(&self) -> bool {
        self.phc
    }

    /// Whether cells were split per history on request.
    pub fn forced(&self) -> bool {
        self.forced
    }

    /// Histories bundled with `h` for player `player`.
    pub fn bundle(&self, player: usize, h: HistoryId) -> &[HistoryId] {
        self.members(player, self.cell_of(player, h))
    }
}

/// Builds the partition. With `force_phc`, every cell is further split by
/// public history.
pub fn coarsest_valid_partition(game: &Game, force_phc: bool) -> Partition {
    let n = game.players();
    let nodes = game.non_terminal().end;
    let mut cell = vec![vec![0; nodes]; n];
    let mut members = vec![Vec::new(); n];
    for j in 0..n {
        // recall[h]: j's view of the path to h
        let mut recall: Vec<String> = vec![String::new(); nodes];
        let mut ids: HashMap<String, usize> = HashMap::new();
        for h in game.non_terminal() {
            let hist = game.history(h);
            if let Some(p) = hist.parent {
                let parent = game.history(p);
                recall[h] = format!(
                    "{}|{}>{}",
                    recall[p],
                    parent.actions[j].join(","),
                    parent.actions[j][hist.last[j]]
                );
            }
            let mut key = format!("{}|{}", recall[h], hist.actions[j].join(","));
            if force_phc {
                key.push_str(&format!("#{h}"));
            }
            let next = ids.len();
            let id = *ids.entry(key).or_insert(next);
            if id == next {
                members[j].push(Vec::new());
            }
            cell[j][h] = id;
            members[j][id].push(h);
        }
    }
    let phc = members.iter().flatten().all(|c: &Vec<HistoryId>| c.len() == 1);
    Partition { cell, members, phc, forced: force_phc }
}

/// True iff no cell bundles distinct public histories.
pub fn check_phc(partition: &Partition) -> bool {
    partition.members.iter().flatten().all(|c| c.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_game, SIGNALING_FIXTURE};
    use crate::scramble::scramble;

    #[test]
    fn receiver_bundles_both_messages() {
        let g = parse_game(SIGNALING_FIXTURE).unwrap();
        let p = coarsest_valid_partition(&g, false);
        let a = g.parse_history("A").unwrap();
        let b = g.parse_history("B").unwrap();
        assert_eq!(p.bundle(1, a), &[a, b]);
        assert_eq!(p.bundle(0, a), &[a]);
        assert!(!check_phc(&p));
        assert!(check_phc(&coarsest_valid_partition(&g, true)));
        assert!(check_phc(&coarsest_valid_partition(&scramble(&g), false)));
    }
}
