//! Counterfactual causality for executions of transition systems and for
//! losing strategies in two-player reachability games.
//!
//! A set of states `C` is a counterfactual cause for an effect on an
//! execution if the executions that avoid `C` and are closest to the given
//! one (under a chosen distance) do not exhibit the effect. The crate
//! decides this with polynomial constructions for the prefix, Hamming,
//! generalized Hamming and Levenshtein distances, and provides brute-force
//! definitional oracles next to each checker. For games, the same idea is
//! lifted to distances between memoryless strategies, together with
//! explanations: sets of vertices where a losing strategy must change.

pub mod distances;
pub mod error;
pub mod exec;
pub mod game_causality;
pub mod generate;
pub mod io;
pub mod model;
pub mod sem_bridge;
pub mod shortest_path;
pub mod ts_causality;

pub use error::{Error, Result};
