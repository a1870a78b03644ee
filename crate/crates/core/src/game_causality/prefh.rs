use std::collections::VecDeque;

use super::arena::Arena;
use super::{region_of, wins_in, GameCauseQuery};
use crate::distances::Distance;
use crate::model::{Owner, Player, StateId, Strategy};

/// Closest `C`-avoiding strategies under the Hausdorff prefix distance.
///
/// A strategy is at distance at most `2^-(m+1)` from σ iff it agrees with σ
/// on every owned vertex at depth below `m` in `G^σ`. The largest `m` for
/// which pinning those choices still leaves `C` avoidable fixes the minimal
/// distance; the closest avoiders are then exactly the strategies that keep
/// the pins and stay in the pinned avoid region. They all win iff the
/// opponent cannot win even when also resolving `Π`'s remaining choices.
///
/// Returns the minimal distance, a closest avoider (a losing one if any),
/// and whether all closest avoiders win.
pub(super) fn closest_avoiders(q: &GameCauseQuery) -> (Distance, Strategy, bool) {
    let game = q.game;
    let player = q.player();
    let n = game.len();
    let depth = sigma_depths(q);
    let max_depth = depth.iter().flatten().copied().max().unwrap_or(0);
    let pinned_arena = |m: usize| {
        let mut arena = Arena::of(game);
        arena.pin(
            &q.sigma,
            (0..n).filter(|&v| depth[v].is_some_and(|d| d < m)),
        );
        arena
    };
    let feasible = |m: usize| {
        let arena = pinned_arena(m);
        region_of(&arena, player, &q.cause).contains(arena.initial)
    };
    // feasibility is monotone in m and holds for m = 0
    let mut m = 0;
    while m <= max_depth && feasible(m + 1) {
        m += 1;
    }
    let min = if m > max_depth {
        Distance::ZERO
    } else {
        Distance::pow2_neg(m + 1)
    };

    let mut allowed = pinned_arena(m);
    let region = region_of(&allowed, player, &q.cause);
    for v in 0..n {
        if !region.contains(v) {
            allowed.succ[v].clear();
        } else if allowed.owned(v, player) {
            allowed.succ[v] = region.choices[v].clone();
        }
    }
    let mut choices: Vec<Option<StateId>> = (0..n)
        .map(|v| {
            q.sigma.choice(v).map(|s| {
                if allowed.succ[v].is_empty() || allowed.succ[v].contains(&s) {
                    s
                } else {
                    allowed.succ[v][0]
                }
            })
        })
        .collect();
    let all_win = wins_in(&allowed, player);
    if !all_win {
        let route: Vec<StateId> = match player {
            Player::Reach => {
                let (stem, cycle) = allowed.lasso().expect("a losing play exists");
                let closing = cycle[0];
                stem.into_iter().chain(cycle).chain([closing]).collect()
            }
            Player::Safe => {
                let effect: Vec<bool> =
                    allowed.owners.iter().map(|&o| o == Owner::Effect).collect();
                allowed.path_to(&effect).expect("a losing play exists")
            }
        };
        for w in route.windows(2) {
            if allowed.owned(w[0], player) {
                choices[w[0]] = Some(w[1]);
            }
        }
    }
    let witness = Strategy::new(game, player, choices).expect("allowed choices are edges");
    (min, witness, all_win)
}

/// BFS depth of every vertex in `G^σ`.
fn sigma_depths(q: &GameCauseQuery) -> Vec<Option<usize>> {
    let g = q.game.restrict(&q.sigma);
    let mut depth = vec![None; g.len()];
    depth[g.initial()] = Some(0);
    let mut queue = VecDeque::from([g.initial()]);
    while let Some(v) = queue.pop_front() {
        let d = depth[v].unwrap();
        for &w in g.successors(v) {
            if depth[w].is_none() {
                depth[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    depth
}
