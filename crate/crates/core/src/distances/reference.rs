//! Definitional reference implementations of the strategy distances.
//!
//! These follow the definitions directly and share no code with the fast
//! routes in the parent module; they serve as oracles in tests and in the
//! brute-force cause checker.

use std::collections::VecDeque;

use super::Distance;
use crate::model::{Game, StateId, Strategy};

fn strategy_successors<'a>(game: &'a Game, strategy: &'a Strategy, v: StateId) -> &'a [StateId] {
    match &strategy.choices()[v] {
        Some(c) => std::slice::from_ref(c),
        None => game.successors(v),
    }
}

/// All play prefixes of `strategy` of length `max_len`, plus the complete
/// finite plays that are shorter. The flag marks complete plays.
pub fn play_prefixes(
    game: &Game,
    strategy: &Strategy,
    max_len: usize,
) -> Vec<(Vec<StateId>, bool)> {
    let mut out = Vec::new();
    let mut stack = vec![vec![game.initial()]];
    while let Some(p) = stack.pop() {
        let last = *p.last().unwrap();
        if game.is_effect(last) {
            out.push((p, true));
        } else if p.len() >= max_len {
            out.push((p, false));
        } else {
            for &w in strategy_successors(game, strategy, last).iter().rev() {
                let mut q = p.clone();
                q.push(w);
                stack.push(q);
            }
        }
    }
    out
}

/// Length of the longest prefix of `p` that `strategy` can produce.
fn consistent_prefix_len(game: &Game, strategy: &Strategy, p: &[StateId]) -> usize {
    let mut k = 1;
    while k < p.len() {
        let v = p[k - 1];
        if game.is_owned_by(v, strategy.player()) && strategy.choice(v) != Some(p[k]) {
            break;
        }
        k += 1;
    }
    k
}

fn directed(game: &Game, from: &Strategy, to: &Strategy, max_len: usize) -> Distance {
    play_prefixes(game, from, max_len)
        .into_iter()
        .map(|(p, _)| {
            let m = consistent_prefix_len(game, to, &p);
            if m == p.len() {
                Distance::ZERO
            } else {
                Distance::pow2_neg(m)
            }
        })
        .max()
        .unwrap_or(Distance::ZERO)
}

/// Hausdorff distance between the play sets of two strategies under the
/// path prefix distance, evaluated on play prefixes of length `|V| + 1`.
pub fn hausdorff_pref_by_prefixes(game: &Game, sigma: &Strategy, tau: &Strategy) -> Distance {
    let k = game.len() + 1;
    directed(game, sigma, tau, k).max(directed(game, tau, sigma, k))
}

fn reachability(game: &Game, strategy: &Strategy) -> Vec<Vec<bool>> {
    (0..game.len())
        .map(|s| {
            let mut seen = vec![false; game.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in strategy_successors(game, strategy, v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            seen
        })
        .collect()
}

/// `sup` over τ-plays of the number of distinct vertices where the play
/// leaves σ, computed by enumerating the orders in which a play can first
/// visit the disagreement vertices: a τ-play visits `d_1, …, d_k` in that
/// order iff each is reachable from the previous one in `G^τ`.
pub fn dstrat_by_visit_orders(game: &Game, tau: &Strategy, sigma: &Strategy) -> usize {
    let diff = tau.disagreements(sigma);
    let reach = reachability(game, tau);
    fn extend(
        reach: &[Vec<bool>],
        diff: &[StateId],
        used: &mut Vec<bool>,
        at: StateId,
        depth: usize,
    ) -> usize {
        let mut best = depth;
        for (i, &d) in diff.iter().enumerate() {
            if !used[i] && reach[at][d] {
                used[i] = true;
                best = best.max(extend(reach, diff, used, d, depth + 1));
                used[i] = false;
            }
        }
        best
    }
    let mut used = vec![false; diff.len()];
    extend(&reach, &diff, &mut used, game.initial(), 0)
}

pub fn dstar_by_visit_orders(game: &Game, tau: &Strategy, sigma: &Strategy) -> usize {
    dstrat_by_visit_orders(game, tau, sigma).max(dstrat_by_visit_orders(game, sigma, tau))
}
