//! Definitional checks by enumeration of all MD strategies. They share no
//! code with the fast procedures beyond the model and the distance
//! functions.

use std::collections::BTreeSet;

use super::{GameCauseQuery, GameCauseVerdict, GameMetric};
use crate::distances::reference::{
    dstar_by_visit_orders, hausdorff_pref_by_prefixes, play_prefixes,
};
use crate::distances::{d_hamm_s, Budget, Distance};
use crate::error::Result;
use crate::model::{Game, Player, StateId, StateSet, Strategy};

/// Winning check by play prefixes of length `|V| + 1`: under an MD strategy
/// a play that has not ended by then repeats a vertex and can loop forever.
pub fn is_winning_by_plays(game: &Game, strategy: &Strategy) -> bool {
    let prefixes = play_prefixes(game, strategy, game.len() + 1);
    match strategy.player() {
        Player::Reach => prefixes.iter().all(|(_, complete)| *complete),
        Player::Safe => prefixes.iter().all(|(_, complete)| !*complete),
    }
}

fn avoids_by_plays(game: &Game, strategy: &Strategy, cause: &StateSet) -> bool {
    play_prefixes(game, strategy, game.len() + 1)
        .iter()
        .all(|(p, _)| p.iter().all(|v| !cause.contains(v)))
}

/// Condition 1 by search over (vertex, cause visited) pairs of `G^σ`.
fn losing_play_through_cause(game: &Game, sigma: &Strategy, cause: &StateSet) -> bool {
    let n = game.len();
    let g = game.restrict(sigma);
    let id = |v: StateId, f: bool| v * 2 + usize::from(f);
    let start = id(game.initial(), cause.contains(&game.initial()));
    let succ = |c: usize| -> Vec<usize> {
        let (v, f) = (c / 2, c % 2 == 1);
        g.successors(v)
            .iter()
            .map(|&w| id(w, f || cause.contains(&w)))
            .collect()
    };
    match sigma.player() {
        Player::Safe => {
            let mut seen = vec![false; 2 * n];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(c) = stack.pop() {
                if c % 2 == 1 && game.is_effect(c / 2) {
                    return true;
                }
                for d in succ(c) {
                    if !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
            false
        }
        Player::Reach => {
            // a reachable cycle of configurations that already visited C
            fn dfs(c: usize, color: &mut [u8], succ: &dyn Fn(usize) -> Vec<usize>) -> bool {
                color[c] = 1;
                for d in succ(c) {
                    if color[d] == 1 && d % 2 == 1 {
                        return true;
                    }
                    if color[d] == 0 && dfs(d, color, succ) {
                        return true;
                    }
                }
                color[c] = 2;
                false
            }
            let mut color = vec![0u8; 2 * n];
            dfs(start, &mut color, &succ)
        }
    }
}

fn distance(game: &Game, metric: GameMetric, tau: &Strategy, sigma: &Strategy) -> Distance {
    match metric {
        GameMetric::PrefH => hausdorff_pref_by_prefixes(game, sigma, tau),
        GameMetric::HammS => Distance::from_count(d_hamm_s(tau, sigma).expect("same player")),
        GameMetric::DStar => Distance::from_count(dstar_by_visit_orders(game, tau, sigma)),
    }
}

/// The cause conditions applied literally to every MD strategy.
pub fn brute_force_check_cause(
    q: &GameCauseQuery,
    budget: &mut Budget,
) -> Result<GameCauseVerdict> {
    q.validate()?;
    let game = q.game;
    let c1 = losing_play_through_cause(game, &q.sigma, &q.cause);
    let mut closest: Vec<(Strategy, bool)> = Vec::new();
    let mut min: Option<Distance> = None;
    for tau in Strategy::enumerate(game, q.player()) {
        budget.tick()?;
        if !avoids_by_plays(game, &tau, &q.cause) {
            continue;
        }
        let d = distance(game, q.metric, &tau, &q.sigma);
        if min.is_none_or(|m| d < m) {
            min = Some(d);
            closest.clear();
        }
        if min == Some(d) {
            let wins = is_winning_by_plays(game, &tau);
            closest.push((tau, wins));
        }
    }
    let all_win = closest.iter().all(|(_, w)| *w);
    let witness = closest
        .iter()
        .find(|(_, w)| !*w)
        .or(closest.first())
        .cloned();
    Ok(GameCauseVerdict {
        is_cause: c1 && min.is_some() && all_win,
        losing_play_through_cause: c1,
        avoidable: min.is_some(),
        min_distance: min,
        witness_wins: witness.as_ref().map(|(_, w)| *w),
        witness: witness.map(|(t, _)| t),
    })
}

/// A winning strategy that differs from σ exactly on `vertices`, by
/// enumeration.
pub fn brute_force_is_explanation(
    game: &Game,
    sigma: &Strategy,
    vertices: &BTreeSet<StateId>,
    budget: &mut Budget,
) -> Result<Option<Strategy>> {
    for tau in Strategy::enumerate(game, sigma.player()) {
        budget.tick()?;
        if tau
            .disagreements(sigma)
            .into_iter()
            .collect::<BTreeSet<_>>()
            == *vertices
            && is_winning_by_plays(game, &tau)
        {
            return Ok(Some(tau));
        }
    }
    Ok(None)
}

/// Least distance to σ over winning MD strategies, by enumeration; `None`
/// if the player cannot win.
pub fn brute_force_min_winning_distance(
    game: &Game,
    sigma: &Strategy,
    metric: GameMetric,
    budget: &mut Budget,
) -> Result<Option<Distance>> {
    let mut best: Option<Distance> = None;
    for tau in Strategy::enumerate(game, sigma.player()) {
        budget.tick()?;
        if is_winning_by_plays(game, &tau) {
            let d = distance(game, metric, &tau, sigma);
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    Ok(best)
}
