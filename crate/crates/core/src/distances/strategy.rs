use std::collections::{BTreeSet, HashSet, VecDeque};

use super::Distance;
use crate::error::{Error, Result};
use crate::model::{Game, Play, StateId, Strategy};

/// Default node-expansion budget for exact searches.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Counts node expansions of an exact search and fails once the limit is
/// reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}

fn same_player(sigma: &Strategy, tau: &Strategy) -> Result<()> {
    if sigma.player() != tau.player() {
        return Err(Error::PreconditionViolated(
            "strategies belong to different players".into(),
        ));
    }
    Ok(())
}

/// Hausdorff lifting of the path prefix distance to MD strategies.
///
/// With `j` the least BFS depth, in the graph of edges allowed by both
/// strategies, of an owned vertex where they disagree, the value is
/// `2^-(j+1)`; it is `0` when no such vertex is reachable.
pub fn d_pref_hausdorff(game: &Game, sigma: &Strategy, tau: &Strategy) -> Result<Distance> {
    same_player(sigma, tau)?;
    let mut depth = vec![usize::MAX; game.len()];
    let mut queue = VecDeque::from([game.initial()]);
    depth[game.initial()] = 0;
    while let Some(v) = queue.pop_front() {
        let d = depth[v];
        let next: &[StateId] = match (sigma.choice(v), tau.choice(v)) {
            (Some(a), Some(b)) if a != b => return Ok(Distance::pow2_neg(d + 1)),
            (Some(_), _) => std::slice::from_ref(sigma.choices()[v].as_ref().unwrap()),
            _ => game.successors(v),
        };
        for &w in next {
            if depth[w] == usize::MAX {
                depth[w] = d + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(Distance::ZERO)
}

/// Number of owned vertices where the two strategies choose differently.
pub fn d_hamm_s(sigma: &Strategy, tau: &Strategy) -> Result<usize> {
    same_player(sigma, tau)?;
    Ok(sigma.disagreements(tau).len())
}

/// Number of distinct vertices owned by σ's player at which the play moves
/// differently from σ. Lassos are evaluated over stem plus one unrolling of
/// the cycle, which already contains every move of the play.
pub fn play_dist(game: &Game, play: &Play, sigma: &Strategy) -> usize {
    let seq = play.unrolled();
    let mut seen = BTreeSet::new();
    for w in seq.windows(2) {
        if game.is_owned_by(w[0], sigma.player()) && sigma.choice(w[0]) != Some(w[1]) {
            seen.insert(w[0]);
        }
    }
    seen.len()
}

/// Supremum of `play_dist(ρ, σ)` over all τ-plays `ρ`.
///
/// Explores configurations (vertex, set of disagreement vertices already
/// visited) of `G^τ`; the answer is the largest set seen. Exponential in the
/// number of disagreement vertices.
pub fn dstrat(game: &Game, tau: &Strategy, sigma: &Strategy, budget: &mut Budget) -> Result<usize> {
    same_player(sigma, tau)?;
    let mut marked = vec![false; game.len()];
    for v in tau.disagreements(sigma) {
        marked[v] = true;
    }
    let succ = |v: StateId| -> &[StateId] {
        match tau.choices()[v].as_ref() {
            Some(c) => std::slice::from_ref(c),
            None => game.successors(v),
        }
    };
    max_marked_on_paths(game.len(), game.initial(), succ, &marked, budget)
}

/// Largest number of distinct marked vertices on a path from `start`,
/// by search over (vertex, visited marked set) configurations.
pub(crate) fn max_marked_on_paths<'a, F>(
    n: usize,
    start: StateId,
    succ: F,
    marked: &[bool],
    budget: &mut Budget,
) -> Result<usize>
where
    F: Fn(StateId) -> &'a [StateId],
{
    let mut slot = vec![usize::MAX; n];
    let mut total = 0;
    for v in (0..n).filter(|&v| marked[v]) {
        slot[v] = total;
        total += 1;
    }
    if total == 0 {
        return Ok(0);
    }
    let words = total.div_ceil(64);
    let mark = |mask: &mut Vec<u64>, v: StateId| {
        if slot[v] != usize::MAX {
            mask[slot[v] / 64] |= 1u64 << (slot[v] % 64);
        }
    };
    let mut first = vec![0u64; words];
    mark(&mut first, start);
    let mut seen: HashSet<(StateId, Vec<u64>)> = HashSet::new();
    let mut stack = vec![(start, first)];
    let mut best = 0usize;
    while let Some((v, mask)) = stack.pop() {
        if !seen.insert((v, mask.clone())) {
            continue;
        }
        budget.tick()?;
        let count = mask.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        best = best.max(count);
        if best == total {
            break;
        }
        for &w in succ(v) {
            let mut next = mask.clone();
            mark(&mut next, w);
            if !seen.contains(&(w, next.clone())) {
                stack.push((w, next));
            }
        }
    }
    Ok(best)
}

/// `d*(τ, σ) = max(dstrat(τ, σ), dstrat(σ, τ))`.
pub fn dstar(game: &Game, tau: &Strategy, sigma: &Strategy, budget: &mut Budget) -> Result<usize> {
    let a = dstrat(game, tau, sigma, budget)?;
    let b = dstrat(game, sigma, tau, budget)?;
    Ok(a.max(b))
}
