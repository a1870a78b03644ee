//! Counterfactual causes for losing strategies in reachability games, and
//! explanations of how a losing strategy has to change.
//!
//! For a player `Π` losing with the MD strategy `σ`, a vertex set `C` is a
//! `D`-counterfactual cause if
//!
//! 1. some `σ`-play visits `C` and is lost by `Π`,
//! 2. some MD strategy of `Π` avoids `C` (no play under it visits `C`), and
//! 3. every `C`-avoiding MD strategy at minimal `D`-distance to `σ` wins.

mod arena;
mod explain;
mod oracle;
mod prefh;
mod search;

use std::fmt;
use std::str::FromStr;

use crate::distances::{Budget, Distance};
use crate::error::{Error, Result};
use crate::model::{Game, Owner, Player, StateId, StateSet, Strategy};
use arena::Arena;

pub use explain::{
    extract_explanation, is_explanation, is_minimal_explanation,
    min_dstar_winning_strategy_acyclic, min_winning_distance, Explanation, MinDstarStrategy,
    WinningDistance,
};
pub use oracle::{
    brute_force_check_cause, brute_force_is_explanation, brute_force_min_winning_distance,
    is_winning_by_plays,
};

/// Distance between MD strategies used in a cause query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameMetric {
    /// Hausdorff lifting of the prefix distance.
    PrefH,
    /// Number of vertices with a different choice.
    HammS,
    /// `d*`: most distinct deviating vertices on a single play, both ways.
    DStar,
}

impl GameMetric {
    pub fn name(self) -> &'static str {
        match self {
            GameMetric::PrefH => "pref-h",
            GameMetric::HammS => "hamm-s",
            GameMetric::DStar => "dstar",
        }
    }
}

impl fmt::Display for GameMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GameMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pref-h" => Ok(GameMetric::PrefH),
            "hamm-s" => Ok(GameMetric::HammS),
            "dstar" => Ok(GameMetric::DStar),
            _ => Err(Error::Parse(format!(
                "unknown metric `{s}` (expected pref-h, hamm-s or dstar)"
            ))),
        }
    }
}

/// Winning regions and MD winning strategies of both players.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinningAnalysis {
    /// Attractor round of every vertex in Reach's winning region.
    pub rank: Vec<Option<usize>>,
    pub reach_strategy: Strategy,
    pub safe_strategy: Strategy,
}

impl WinningAnalysis {
    pub fn winner(&self, v: StateId) -> Player {
        if self.rank[v].is_some() {
            Player::Reach
        } else {
            Player::Safe
        }
    }

    pub fn region(&self, player: Player) -> Vec<bool> {
        self.rank
            .iter()
            .map(|r| r.is_some() == (player == Player::Reach))
            .collect()
    }

    pub fn strategy(&self, player: Player) -> &Strategy {
        match player {
            Player::Reach => &self.reach_strategy,
            Player::Safe => &self.safe_strategy,
        }
    }
}

/// Solves the game with the attractor construction. The strategies win from
/// every vertex of their player's region.
pub fn solve(game: &Game) -> WinningAnalysis {
    let arena = Arena::of(game);
    let (rank, attract) = arena.reach_attractor();
    let reach = (0..game.len())
        .map(|v| {
            game.is_owned_by(v, Player::Reach)
                .then(|| attract[v].unwrap_or(game.successors(v)[0]))
        })
        .collect();
    let safe = (0..game.len())
        .map(|v| {
            game.is_owned_by(v, Player::Safe).then(|| {
                let succ = game.successors(v);
                *succ
                    .iter()
                    .find(|&&w| rank[w].is_none())
                    .unwrap_or(&succ[0])
            })
        })
        .collect();
    WinningAnalysis {
        reach_strategy: Strategy::new(game, Player::Reach, reach)
            .expect("attractor choices are edges"),
        safe_strategy: Strategy::new(game, Player::Safe, safe).expect("region choices are edges"),
        rank,
    }
}

/// Whether the strategy wins from the initial vertex against every
/// opponent behaviour.
pub fn is_winning(game: &Game, strategy: &Strategy) -> bool {
    let mut arena = Arena::of(game);
    arena.pin(strategy, 0..game.len());
    wins_in(&arena, strategy.player())
}

/// Whether `player` wins every play of the arena.
fn wins_in(arena: &Arena, player: Player) -> bool {
    match player {
        Player::Reach => {
            let reach = arena.reachable();
            let dead_end = (0..arena.len())
                .any(|v| reach[v] && arena.succ[v].is_empty() && arena.owners[v] != Owner::Effect);
            !dead_end && arena.lasso().is_none()
        }
        Player::Safe => {
            let effect: Vec<bool> = arena.owners.iter().map(|&o| o == Owner::Effect).collect();
            arena.path_to(&effect).is_none()
        }
    }
}

/// Whether no play under the strategy visits `cause`.
pub fn avoids(game: &Game, strategy: &Strategy, cause: &StateSet) -> bool {
    let reach = game.restrict(strategy).reachable_from(game.initial());
    !cause.iter().any(|&c| reach[c])
}

/// The vertices from which `player` can avoid `C` forever, with the
/// region-preserving choices at the player's vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvoidRegion {
    pub region: Vec<bool>,
    /// For every vertex of the player inside the region, the successors
    /// that stay inside; empty elsewhere.
    pub choices: Vec<Vec<StateId>>,
}

impl AvoidRegion {
    pub fn contains(&self, v: StateId) -> bool {
        self.region[v]
    }
}

pub fn avoid_region(game: &Game, player: Player, cause: &StateSet) -> AvoidRegion {
    region_of(&Arena::of(game), player, cause)
}

fn region_of(arena: &Arena, player: Player, cause: &StateSet) -> AvoidRegion {
    let bad: Vec<bool> = (0..arena.len()).map(|v| cause.contains(&v)).collect();
    let region = arena.safety_region(player, &bad);
    let choices = (0..arena.len())
        .map(|v| {
            if region[v] && arena.owned(v, player) {
                arena.succ[v]
                    .iter()
                    .copied()
                    .filter(|&w| region[w])
                    .collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    AvoidRegion { region, choices }
}

/// A cause query on a game; the player is the one owning `sigma`.
#[derive(Debug, Clone)]
pub struct GameCauseQuery<'a> {
    pub game: &'a Game,
    pub sigma: Strategy,
    pub cause: StateSet,
    pub metric: GameMetric,
}

impl<'a> GameCauseQuery<'a> {
    pub fn new(game: &'a Game, sigma: Strategy, cause: StateSet, metric: GameMetric) -> Self {
        Self {
            game,
            sigma,
            cause,
            metric,
        }
    }

    pub fn player(&self) -> Player {
        self.sigma.player()
    }

    pub fn validate(&self) -> Result<()> {
        self.sigma.validate(self.game)?;
        if let Some(&c) = self.cause.iter().find(|&&c| c >= self.game.len()) {
            return Err(Error::PreconditionViolated(format!(
                "vertex index {c} is out of range"
            )));
        }
        if let Some(&c) = self.cause.iter().find(|&&c| self.game.is_effect(c)) {
            return Err(Error::PreconditionViolated(format!(
                "cause vertex `{}` is an effect vertex",
                self.game.name(c)
            )));
        }
        Ok(())
    }
}

/// Outcome of a game cause check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameCauseVerdict {
    pub is_cause: bool,
    /// Condition 1: some σ-play visits `C` and is lost.
    pub losing_play_through_cause: bool,
    /// Condition 2: some MD strategy avoids `C`.
    pub avoidable: bool,
    /// Distance from σ to the closest `C`-avoiding strategies.
    pub min_distance: Option<Distance>,
    /// A closest `C`-avoiding strategy; a losing one if there is one.
    pub witness: Option<Strategy>,
    pub witness_wins: Option<bool>,
}

/// Condition 1, decided on `G^σ`.
pub fn losing_play_through_cause(game: &Game, sigma: &Strategy, cause: &StateSet) -> bool {
    let g = game.restrict(sigma);
    let n = game.len();
    let reach = g.reachable_from(game.initial());
    match sigma.player() {
        Player::Safe => cause.iter().any(|&c| {
            reach[c]
                && g.reachable_from(c)
                    .iter()
                    .enumerate()
                    .any(|(v, &r)| r && game.is_effect(v))
        }),
        Player::Reach => {
            // vertices with an infinite effect-free path in G^σ
            let mut arena = Arena::of(&g);
            arena.owners = vec![Owner::Safe; n];
            for v in (0..n).filter(|&v| game.is_effect(v)) {
                arena.owners[v] = Owner::Effect;
            }
            let (rank, _) = arena.reach_attractor();
            cause.iter().any(|&c| reach[c] && rank[c].is_none())
        }
    }
}

/// Decides whether `C` is a cause of `Π` losing with `σ`.
pub fn check_cause_game(q: &GameCauseQuery, budget: &mut Budget) -> Result<GameCauseVerdict> {
    q.validate()?;
    if q.metric == GameMetric::HammS && !q.game.is_acyclic() {
        return Err(Error::NotAcyclic(
            "the Hamming strategy distance needs an acyclic game".into(),
        ));
    }
    let c1 = losing_play_through_cause(q.game, &q.sigma, &q.cause);
    let region = avoid_region(q.game, q.player(), &q.cause);
    if !region.contains(q.game.initial()) {
        return Ok(GameCauseVerdict {
            is_cause: false,
            losing_play_through_cause: c1,
            avoidable: false,
            min_distance: None,
            witness: None,
            witness_wins: None,
        });
    }
    let (min, witness, wins) = match q.metric {
        GameMetric::PrefH => prefh::closest_avoiders(q),
        GameMetric::HammS => search::closest_avoiders(q, &region, search::Cost::Hamm, budget)?,
        GameMetric::DStar => search::closest_avoiders(q, &region, search::Cost::DStar, budget)?,
    };
    Ok(GameCauseVerdict {
        is_cause: c1 && wins,
        losing_play_through_cause: c1,
        avoidable: true,
        min_distance: Some(min),
        witness_wins: Some(is_winning(q.game, &witness)),
        witness: Some(witness),
    })
}
