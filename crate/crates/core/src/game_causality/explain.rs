use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use super::arena::Arena;
use super::search::{self, Cost, Goal, Space};
use super::{is_winning, solve, GameMetric};
use crate::distances::{dstar, Budget};
use crate::error::{Error, Result};
use crate::model::{Game, Owner, Player, StateId, StateSet, Strategy};

/// A set of the player's vertices where σ has to change, with a winning
/// strategy that changes σ exactly there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub vertices: BTreeSet<StateId>,
    pub witness: Strategy,
}

/// Computes an explanation from a cause `C`: solve the game in which `C`
/// is lost for the player, then take a winning strategy that keeps σ's
/// choice wherever that choice is itself winning.
pub fn extract_explanation(game: &Game, sigma: &Strategy, cause: &StateSet) -> Result<Explanation> {
    sigma.validate(game)?;
    let player = sigma.player();
    if cause.contains(&game.initial()) {
        return Err(Error::NoWinningStrategy);
    }
    let mut arena = Arena::of(game);
    for &c in cause {
        match player {
            Player::Reach => arena.succ[c] = vec![c],
            Player::Safe => {
                arena.owners[c] = Owner::Effect;
                arena.succ[c].clear();
            }
        }
    }
    let (rank, attract) = arena.reach_attractor();
    let choices: Vec<Option<StateId>> = match player {
        Player::Reach => {
            if rank[game.initial()].is_none() {
                return Err(Error::NoWinningStrategy);
            }
            (0..game.len())
                .map(|v| {
                    let s = sigma.choice(v)?;
                    Some(match rank[v] {
                        Some(r) if rank[s].is_none_or(|rs| rs >= r) => attract[v].unwrap(),
                        _ => s,
                    })
                })
                .collect()
        }
        Player::Safe => {
            if rank[game.initial()].is_some() {
                return Err(Error::NoWinningStrategy);
            }
            (0..game.len())
                .map(|v| {
                    let s = sigma.choice(v)?;
                    Some(if rank[v].is_none() && rank[s].is_some() {
                        *arena.succ[v].iter().find(|&&w| rank[w].is_none()).unwrap()
                    } else {
                        s
                    })
                })
                .collect()
        }
    };
    let witness = Strategy::new(game, player, choices)?;
    Ok(Explanation {
        vertices: witness.disagreements(sigma).into_iter().collect(),
        witness,
    })
}

/// Decides whether σ can be made winning by changing it exactly on
/// `vertices`; returns such a strategy if so.
pub fn is_explanation(
    game: &Game,
    sigma: &Strategy,
    vertices: &BTreeSet<StateId>,
) -> Result<Option<Strategy>> {
    let restricted = explanation_game(game, sigma, vertices)?;
    let analysis = solve(&restricted);
    let player = sigma.player();
    if analysis.winner(game.initial()) != player {
        return Ok(None);
    }
    Ok(Some(Strategy::new(
        game,
        player,
        analysis.strategy(player).choices().to_vec(),
    )?))
}

/// The game where the player must leave σ at `vertices` and follow σ at
/// its other vertices.
fn explanation_game(game: &Game, sigma: &Strategy, vertices: &BTreeSet<StateId>) -> Result<Game> {
    sigma.validate(game)?;
    let player = sigma.player();
    if let Some(&v) = vertices
        .iter()
        .find(|&&v| v >= game.len() || !game.is_owned_by(v, player))
    {
        return Err(Error::PreconditionViolated(format!(
            "vertex {v} is not owned by the {player} player"
        )));
    }
    if let Some(&v) = vertices.iter().find(|&&v| game.successors(v).len() == 1) {
        return Err(Error::EmptyChoice(game.name(v).to_string()));
    }
    let mut edges = Vec::new();
    for (a, b) in game.edges() {
        let keep = match sigma.choice(a) {
            None => true,
            Some(s) if vertices.contains(&a) => b != s,
            Some(s) => b == s,
        };
        if keep {
            edges.push((a, b));
        }
    }
    Game::from_indices(
        game.names().to_vec(),
        game.owners().to_vec(),
        game.initial(),
        &edges,
    )
}

/// Least distance to σ of a winning strategy, with a strategy attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinningDistance {
    pub distance: usize,
    pub strategy: Strategy,
    /// False when a threshold stopped the search before the minimum was
    /// established; `distance` is then only an upper bound.
    pub exact: bool,
}

/// Exact minimum of `D(τ, σ)` over winning MD strategies `τ`, by
/// branch-and-bound. With a threshold `k` the search stops at the first
/// winning strategy within distance `k`.
pub fn min_winning_distance(
    game: &Game,
    sigma: &Strategy,
    metric: GameMetric,
    threshold: Option<usize>,
    budget: &mut Budget,
) -> Result<WinningDistance> {
    sigma.validate(game)?;
    let cost = search_cost(metric)?;
    let player = sigma.player();
    let analysis = solve(game);
    if analysis.winner(game.initial()) != player {
        return Err(Error::NoWinningStrategy);
    }
    if is_winning(game, sigma) {
        return Ok(WinningDistance {
            distance: 0,
            strategy: sigma.clone(),
            exact: true,
        });
    }
    let region = analysis.region(player);
    let allowed = (0..game.len())
        .map(|v| {
            if sigma.choice(v).is_some() {
                game.successors(v)
                    .iter()
                    .copied()
                    .filter(|&w| region[w])
                    .collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let space = Space {
        game,
        sigma,
        allowed,
        fallback: sigma.choices().to_vec(),
    };
    let out = search::run(&space, cost, Goal::MinWinning { threshold }, budget)?;
    let distance = out
        .best
        .expect("the player wins, so a winning strategy is found");
    let exact = threshold.is_none_or(|k| distance > k);
    Ok(WinningDistance {
        distance,
        strategy: out.best_strategy.unwrap(),
        exact,
    })
}

fn search_cost(metric: GameMetric) -> Result<Cost> {
    match metric {
        GameMetric::HammS => Ok(Cost::Hamm),
        GameMetric::DStar => Ok(Cost::DStar),
        GameMetric::PrefH => Err(Error::PreconditionViolated(
            "minimal explanations are defined for hamm-s and dstar".into(),
        )),
    }
}

/// Whether `vertices` is an explanation whose best witness is as close to σ
/// as any winning strategy. Returns false if it is no explanation at all.
pub fn is_minimal_explanation(
    game: &Game,
    sigma: &Strategy,
    vertices: &BTreeSet<StateId>,
    metric: GameMetric,
    budget: &mut Budget,
) -> Result<bool> {
    let cost = search_cost(metric)?;
    if is_explanation(game, sigma, vertices)?.is_none() {
        return Ok(false);
    }
    let min = min_winning_distance(game, sigma, metric, None, budget)?.distance;
    if cost == Cost::Hamm {
        return Ok(vertices.len() == min);
    }
    let restricted = explanation_game(game, sigma, vertices)?;
    let region = solve(&restricted).region(sigma.player());
    let allowed = (0..game.len())
        .map(|v| {
            if sigma.choice(v).is_some() {
                restricted
                    .successors(v)
                    .iter()
                    .copied()
                    .filter(|&w| region[w])
                    .collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let fallback = (0..game.len())
        .map(|v| sigma.choice(v).map(|_| restricted.successors(v)[0]))
        .collect();
    let space = Space {
        game,
        sigma,
        allowed,
        fallback,
    };
    let out = search::run(
        &space,
        Cost::DStar,
        Goal::MinWinning {
            threshold: Some(min),
        },
        budget,
    )?;
    Ok(out.best == Some(min))
}

/// Result of [`min_dstar_winning_strategy_acyclic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinDstarStrategy {
    pub strategy: Strategy,
    pub distance: usize,
    /// True if the shortest-path game already produced an optimal strategy;
    /// false if the exact search had to be used.
    pub certified: bool,
}

/// A winning strategy for Reach with least `d*` to σ, for games whose
/// `G^σ` is acyclic apart from sink self-loops.
///
/// Solves the min-cost reachability game in which leaving σ costs 1. Its
/// value bounds `d*` from below for every winning strategy, so a
/// value-optimal strategy whose exact `d*` meets the value is optimal.
/// Otherwise the exact search decides.
pub fn min_dstar_winning_strategy_acyclic(
    game: &Game,
    sigma: &Strategy,
    budget: &mut Budget,
) -> Result<MinDstarStrategy> {
    sigma.validate(game)?;
    if sigma.player() != Player::Reach {
        return Err(Error::PreconditionViolated(
            "the strategy must belong to the reachability player".into(),
        ));
    }
    if !game.restrict(sigma).is_acyclic() {
        return Err(Error::NotAcyclic("G^σ has a cycle".into()));
    }
    let value = deviation_values(game, sigma);
    if value[game.initial()].is_none() {
        return Err(Error::NoWinningStrategy);
    }
    let cost = |v: StateId, c: StateId| usize::from(sigma.choice(v) != Some(c));
    let choices: Vec<Option<StateId>> = (0..game.len())
        .map(|v| {
            let s = sigma.choice(v)?;
            let Some(val) = value[v] else { return Some(s) };
            let fits = |c: StateId| value[c].is_some_and(|vc| cost(v, c) + vc == val);
            Some(if fits(s) {
                s
            } else {
                *game.successors(v).iter().find(|&&c| fits(c)).unwrap()
            })
        })
        .collect();
    let tau = Strategy::new(game, Player::Reach, choices)?;
    let reach = game.restrict(&tau).reachable_from(game.initial());
    let tau = Strategy::new(
        game,
        Player::Reach,
        (0..game.len())
            .map(|v| {
                if reach[v] {
                    tau.choice(v)
                } else {
                    sigma.choice(v)
                }
            })
            .collect(),
    )?;
    let d = dstar(game, &tau, sigma, budget)?;
    if d == value[game.initial()].unwrap() {
        return Ok(MinDstarStrategy {
            strategy: tau,
            distance: d,
            certified: true,
        });
    }
    let exact = min_winning_distance(game, sigma, GameMetric::DStar, None, budget)?;
    Ok(MinDstarStrategy {
        strategy: exact.strategy,
        distance: exact.distance,
        certified: false,
    })
}

/// Values of the min-cost reachability game where Reach pays 1 for every
/// edge that leaves σ; `None` where Safe can avoid the effect forever.
fn deviation_values(game: &Game, sigma: &Strategy) -> Vec<Option<usize>> {
    let n = game.len();
    let pred = game.predecessors();
    let mut value = vec![None; n];
    let mut pending: Vec<usize> = (0..n).map(|v| game.successors(v).len()).collect();
    let mut heap = BinaryHeap::new();
    for v in (0..n).filter(|&v| game.is_effect(v)) {
        heap.push(Reverse((0usize, v)));
    }
    while let Some(Reverse((d, u))) = heap.pop() {
        if value[u].is_some() {
            continue;
        }
        value[u] = Some(d);
        for &p in &pred[u] {
            if value[p].is_some() {
                continue;
            }
            match game.owner(p) {
                Owner::Reach => {
                    heap.push(Reverse((d + usize::from(sigma.choice(p) != Some(u)), p)))
                }
                Owner::Safe => {
                    pending[p] -= 1;
                    if pending[p] == 0 {
                        heap.push(Reverse((d, p)));
                    }
                }
                Owner::Effect => {}
            }
        }
    }
    value
}
