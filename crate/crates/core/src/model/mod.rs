//! Labeled transition systems, reachability games and memoryless strategies.
//!
//! Transition-system queries quantify over *maximal* paths: finite paths
//! ending in a terminal state, or infinite paths.

mod game;
mod ts;

pub use game::{Game, Owner, Play, Player, Strategy, StrategyIter};
pub use ts::{
    exists_maximal_path_avoiding, exists_path_reaching_avoiding, maximal_avoiding_region,
    reach_avoiding_region, validate_layered, validate_maximal_path, Label, MaximalFinitePath,
    StateId, StateSet, TransitionSystem,
};

pub(crate) use ts::mask;

/// `G^σ`, see [`Game::restrict`].
pub fn restrict_game(game: &Game, strategy: &Strategy) -> Game {
    game.restrict(strategy)
}
