//! Exact branch-and-bound over MD strategies.
//!
//! Only vertices reachable under the partial strategy get decided; the
//! rest keep a fixed fallback choice. Choices at unreachable vertices do not
//! change plays, and keeping σ there never increases a distance, so for the
//! metrics here the restricted strategies contain an optimum.

use std::collections::VecDeque;

use super::arena::Arena;
use super::{is_winning, AvoidRegion, GameCauseQuery};
use crate::distances::{d_hamm_s, dstar, max_marked_on_paths, Budget, Distance};
use crate::error::Result;
use crate::model::{Game, Player, StateId, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Cost {
    Hamm,
    DStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Goal {
    /// Least cost among winning strategies; stop once at most the threshold.
    MinWinning { threshold: Option<usize> },
    /// Least cost among all strategies, and whether all at that cost win.
    ClosestAll,
}

/// The strategies searched: at a reached vertex of the player one of
/// `allowed[v]`, at an unreached one `fallback[v]`.
pub(super) struct Space<'a> {
    pub game: &'a Game,
    pub sigma: &'a Strategy,
    pub allowed: Vec<Vec<StateId>>,
    pub fallback: Vec<Option<StateId>>,
}

#[derive(Debug, Default)]
pub(super) struct Outcome {
    pub best: Option<usize>,
    pub best_strategy: Option<Strategy>,
    pub loser_at_best: Option<Strategy>,
}

struct Searcher<'s, 'a> {
    space: &'s Space<'a>,
    player: Player,
    cost: Cost,
    goal: Goal,
    budget: &'s mut Budget,
    out: Outcome,
    stop: bool,
}

pub(super) fn run(space: &Space, cost: Cost, goal: Goal, budget: &mut Budget) -> Result<Outcome> {
    let mut s = Searcher {
        space,
        player: space.sigma.player(),
        cost,
        goal,
        budget,
        out: Outcome::default(),
        stop: false,
    };
    let mut choices = vec![None; space.game.len()];
    s.explore(&mut choices)?;
    Ok(s.out)
}

impl Searcher<'_, '_> {
    /// Reached vertices and the undecided vertices of the player among them.
    fn frontier(&self, choices: &[Option<StateId>]) -> (Vec<bool>, Vec<StateId>) {
        let game = self.space.game;
        let mut seen = vec![false; game.len()];
        let mut open = Vec::new();
        seen[game.initial()] = true;
        let mut queue = VecDeque::from([game.initial()]);
        while let Some(v) = queue.pop_front() {
            let next: &[StateId] = if game.is_owned_by(v, self.player) {
                match &choices[v] {
                    Some(c) => std::slice::from_ref(c),
                    None => {
                        open.push(v);
                        &[]
                    }
                }
            } else {
                game.successors(v)
            };
            for &w in next {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        open.sort_unstable();
        (seen, open)
    }

    fn lower_bound(&mut self, choices: &[Option<StateId>]) -> Result<usize> {
        let sigma = self.space.sigma;
        let game = self.space.game;
        let marked: Vec<bool> = (0..game.len())
            .map(|v| choices[v].is_some_and(|c| Some(c) != sigma.choice(v)))
            .collect();
        match self.cost {
            Cost::Hamm => Ok(marked.iter().filter(|&&m| m).count()),
            Cost::DStar => {
                let player = self.player;
                let partial = |v: StateId| -> &[StateId] {
                    if game.is_owned_by(v, player) {
                        choices[v].as_slice()
                    } else {
                        game.successors(v)
                    }
                };
                let a =
                    max_marked_on_paths(game.len(), game.initial(), partial, &marked, self.budget)?;
                let along_sigma = |v: StateId| -> &[StateId] {
                    match sigma.choices()[v].as_ref() {
                        Some(c) => std::slice::from_ref(c),
                        None => game.successors(v),
                    }
                };
                let b = max_marked_on_paths(
                    game.len(),
                    game.initial(),
                    along_sigma,
                    &marked,
                    self.budget,
                )?;
                Ok(a.max(b))
            }
        }
    }

    fn pruned(&self, bound: usize) -> bool {
        match (self.goal, self.out.best) {
            (_, None) => false,
            (Goal::MinWinning { .. }, Some(b)) => bound >= b,
            (Goal::ClosestAll, Some(b)) => bound > b,
        }
    }

    /// For Reach, a cycle among decided reached vertices dooms every
    /// completion.
    fn doomed(&self, choices: &[Option<StateId>]) -> bool {
        if self.player != Player::Reach {
            return false;
        }
        let game = self.space.game;
        let mut arena = Arena::of(game);
        for v in 0..game.len() {
            if game.is_owned_by(v, self.player) {
                arena.succ[v] = choices[v].into_iter().collect();
            }
        }
        arena.lasso().is_some()
    }

    fn explore(&mut self, choices: &mut Vec<Option<StateId>>) -> Result<()> {
        self.budget.tick()?;
        let bound = self.lower_bound(choices)?;
        if self.pruned(bound) {
            return Ok(());
        }
        if matches!(self.goal, Goal::MinWinning { .. }) && self.doomed(choices) {
            return Ok(());
        }
        let (_, open) = self.frontier(choices);
        let Some(&v) = open.first() else {
            return self.leaf(choices);
        };
        let sigma_choice = self.space.sigma.choice(v);
        let mut options = self.space.allowed[v].clone();
        if let Some(pos) = options.iter().position(|&c| Some(c) == sigma_choice) {
            options[..=pos].rotate_right(1);
        }
        for c in options {
            choices[v] = Some(c);
            self.explore(choices)?;
            choices[v] = None;
            if self.stop {
                break;
            }
        }
        Ok(())
    }

    fn leaf(&mut self, choices: &[Option<StateId>]) -> Result<()> {
        let space = self.space;
        let full: Vec<Option<StateId>> = (0..space.game.len())
            .map(|v| choices[v].or(space.fallback[v]))
            .collect();
        let tau = Strategy::new(space.game, self.player, full).expect("search choices are edges");
        let cost = match self.cost {
            Cost::Hamm => d_hamm_s(&tau, space.sigma)?,
            Cost::DStar => dstar(space.game, &tau, space.sigma, self.budget)?,
        };
        let wins = is_winning(space.game, &tau);
        let out = &mut self.out;
        match self.goal {
            Goal::MinWinning { threshold } => {
                if wins && out.best.is_none_or(|b| cost < b) {
                    out.best = Some(cost);
                    out.best_strategy = Some(tau);
                    if cost == 0 || threshold.is_some_and(|k| cost <= k) {
                        self.stop = true;
                    }
                }
            }
            Goal::ClosestAll => match out.best {
                Some(b) if cost > b => {}
                Some(b) if cost == b => {
                    if !wins && out.loser_at_best.is_none() {
                        out.loser_at_best = Some(tau);
                    }
                }
                _ => {
                    out.best = Some(cost);
                    out.loser_at_best = (!wins).then(|| tau.clone());
                    out.best_strategy = Some(tau);
                }
            },
        }
        Ok(())
    }
}

/// Closest `C`-avoiding strategies under the Hamming strategy distance or
/// `d*`: returns the minimal distance, a closest avoider (a losing one if
/// any) and whether all closest avoiders win.
pub(super) fn closest_avoiders(
    q: &GameCauseQuery,
    region: &AvoidRegion,
    cost: Cost,
    budget: &mut Budget,
) -> Result<(Distance, Strategy, bool)> {
    if cost == Cost::Hamm {
        if let Some(r) = tree_closest(q, region) {
            return Ok(r);
        }
    }
    let space = Space {
        game: q.game,
        sigma: &q.sigma,
        allowed: region.choices.clone(),
        fallback: q.sigma.choices().to_vec(),
    };
    let out = run(&space, cost, Goal::ClosestAll, budget)?;
    let best = out
        .best
        .expect("the initial vertex lies in the avoid region");
    let all_win = out.loser_at_best.is_none();
    let witness = out.loser_at_best.or(out.best_strategy).unwrap();
    Ok((Distance::from_count(best), witness, all_win))
}

/// Dynamic program for tree-shaped games (every reachable vertex has one
/// parent, sink self-loops aside): the cheapest avoider picks the cheapest
/// child at the player's vertices and pays for all children elsewhere.
fn tree_closest(q: &GameCauseQuery, region: &AvoidRegion) -> Option<(Distance, Strategy, bool)> {
    let game = q.game;
    let n = game.len();
    let player = q.player();
    let reach = game.reachable_from(game.initial());
    let mut indeg = vec![0usize; n];
    for (a, b) in game.edges() {
        if reach[a] && !(a == b && game.is_sink(a)) {
            indeg[b] += 1;
        }
    }
    if indeg[game.initial()] != 0 || (0..n).any(|v| reach[v] && indeg[v] > 1) {
        return None;
    }
    // children come after parents in BFS order, so a reverse sweep is post-order
    let mut order = Vec::new();
    let mut queue = VecDeque::from([game.initial()]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        if !game.is_sink(v) {
            queue.extend(game.successors(v).iter().copied());
        }
    }
    let mut cost = vec![0usize; n];
    let mut all_win = vec![true; n];
    for &v in order.iter().rev() {
        if !region.contains(v) {
            continue;
        }
        if game.is_effect(v) || game.is_sink(v) {
            all_win[v] = game.is_effect(v) == (player == Player::Reach);
        } else if game.is_owned_by(v, player) {
            let step = |c: StateId| usize::from(Some(c) != q.sigma.choice(v)) + cost[c];
            let best = region.choices[v].iter().map(|&c| step(c)).min()?;
            let win = region.choices[v]
                .iter()
                .filter(|&&c| step(c) == best)
                .all(|&c| all_win[c]);
            cost[v] = best;
            all_win[v] = win;
        } else {
            cost[v] = game.successors(v).iter().map(|&c| cost[c]).sum();
            all_win[v] = game.successors(v).iter().all(|&c| all_win[c]);
        }
    }
    let mut choices = q.sigma.choices().to_vec();
    let mut queue = VecDeque::from([game.initial()]);
    while let Some(v) = queue.pop_front() {
        if game.is_effect(v) || game.is_sink(v) {
            continue;
        }
        if game.is_owned_by(v, player) {
            let step = |c: StateId| usize::from(Some(c) != q.sigma.choice(v)) + cost[c];
            let mut argmin: Vec<StateId> = region.choices[v]
                .iter()
                .copied()
                .filter(|&c| step(c) == cost[v])
                .collect();
            if let Some(pos) = argmin.iter().position(|&c| Some(c) == q.sigma.choice(v)) {
                argmin[..=pos].rotate_right(1);
            }
            let c = if all_win[v] {
                argmin[0]
            } else {
                *argmin.iter().find(|&&c| !all_win[c]).unwrap()
            };
            choices[v] = Some(c);
            queue.push_back(c);
        } else {
            queue.extend(game.successors(v).iter().copied());
        }
    }
    let witness = Strategy::new(game, player, choices).expect("region choices are edges");
    Some((
        Distance::from_count(cost[game.initial()]),
        witness,
        all_win[game.initial()],
    ))
}
