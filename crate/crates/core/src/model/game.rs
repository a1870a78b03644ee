use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ts::{index_unique, topological_order, StateId};
use crate::error::{Error, Result};

/// Owner of a game vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    Reach,
    Safe,
    Effect,
}

/// One of the two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Reach,
    Safe,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Reach => Player::Safe,
            Player::Safe => Player::Reach,
        }
    }

    pub fn owner(self) -> Owner {
        match self {
            Player::Reach => Owner::Reach,
            Player::Safe => Owner::Safe,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Reach => "reach",
            Player::Safe => "safe",
        })
    }
}

/// A two-player turn-based reachability game. Effect vertices are terminal;
/// every other vertex has at least one outgoing edge, so plays are either
/// infinite or end in an effect vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    names: Vec<String>,
    index: HashMap<String, StateId>,
    owners: Vec<Owner>,
    succ: Vec<Vec<StateId>>,
    initial: StateId,
}

impl Game {
    pub fn new(
        vertices: Vec<(String, Owner)>,
        initial: &str,
        edges: &[(String, String)],
    ) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|(n, _)| n.clone()).collect();
        let index = index_unique(&names, "vertex id")?;
        let owners = vertices.iter().map(|(_, o)| *o).collect();
        let init = *index.get(initial).ok_or_else(|| {
            Error::InvalidModel(format!("initial vertex `{initial}` is not declared"))
        })?;
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let lookup = |s: &String| {
                index.get(s).copied().ok_or_else(|| {
                    Error::InvalidModel(format!("edge endpoint `{s}` is not a declared vertex"))
                })
            };
            idx_edges.push((lookup(a)?, lookup(b)?));
        }
        Self::from_indices(names, owners, init, &idx_edges)
    }

    pub fn from_indices(
        names: Vec<String>,
        owners: Vec<Owner>,
        initial: StateId,
        edges: &[(StateId, StateId)],
    ) -> Result<Self> {
        let n = names.len();
        if owners.len() != n {
            return Err(Error::InvalidModel("every vertex needs an owner".into()));
        }
        let index = index_unique(&names, "vertex id")?;
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidModel(
                    "edge endpoint is not a declared vertex".into(),
                ));
            }
            succ[a].push(b);
        }
        for list in &mut succ {
            list.sort_unstable();
            list.dedup();
        }
        let game = Self {
            names,
            index,
            owners,
            succ,
            initial,
        };
        game.check_invariants()?;
        Ok(game)
    }

    fn check_invariants(&self) -> Result<()> {
        if self.initial >= self.len() {
            return Err(Error::InvalidModel("initial vertex is not declared".into()));
        }
        if self.owners[self.initial] == Owner::Effect {
            return Err(Error::InvalidModel(
                "the initial vertex must not be an effect vertex".into(),
            ));
        }
        for v in 0..self.len() {
            match (self.owners[v], self.succ[v].is_empty()) {
                (Owner::Effect, false) => {
                    return Err(Error::InvalidModel(format!(
                        "effect vertex `{}` has outgoing edges",
                        self.names[v]
                    )))
                }
                (Owner::Reach | Owner::Safe, true) => {
                    return Err(Error::InvalidModel(format!(
                        "non-effect vertex `{}` has no outgoing edge",
                        self.names[v]
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// `validate_model` for games.
    pub fn validate(&self) -> Result<()> {
        self.check_invariants()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn owner(&self, v: StateId) -> Owner {
        self.owners[v]
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owners
    }

    pub fn is_effect(&self, v: StateId) -> bool {
        self.owners[v] == Owner::Effect
    }

    pub fn is_owned_by(&self, v: StateId, player: Player) -> bool {
        self.owners[v] == player.owner()
    }

    pub fn owned_by(&self, player: Player) -> Vec<StateId> {
        (0..self.len())
            .filter(|&v| self.is_owned_by(v, player))
            .collect()
    }

    pub fn successors(&self, v: StateId) -> &[StateId] {
        &self.succ[v]
    }

    pub fn name(&self, v: StateId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn ids<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<StateId>> {
        names
            .iter()
            .map(|n| {
                self.id(n.as_ref())
                    .ok_or_else(|| Error::UnknownId(n.as_ref().to_string()))
            })
            .collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().map(move |&b| (a, b)))
    }

    pub fn predecessors(&self) -> Vec<Vec<StateId>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (a, b) in self.edges() {
            pred[b].push(a);
        }
        pred
    }

    /// A sink is a non-effect vertex whose only edge is a self-loop. Sinks
    /// model dead ends that the reachability player loses.
    pub fn is_sink(&self, v: StateId) -> bool {
        self.succ[v].len() == 1 && self.succ[v][0] == v
    }

    /// Acyclicity of the part reachable from the initial vertex, ignoring
    /// the self-loops of sinks.
    pub fn is_acyclic(&self) -> bool {
        let stripped: Vec<Vec<StateId>> = (0..self.len())
            .map(|v| {
                if self.is_sink(v) {
                    Vec::new()
                } else {
                    self.succ[v].clone()
                }
            })
            .collect();
        topological_order(self.len(), |v| &stripped[v], self.initial).is_some()
    }

    /// `G^σ`: drops every edge at σ's vertices that σ does not choose.
    pub fn restrict(&self, strategy: &Strategy) -> Game {
        let mut g = self.clone();
        for v in 0..self.len() {
            if let Some(c) = strategy.choice(v) {
                g.succ[v] = vec![c];
            }
        }
        g
    }

    /// Vertices reachable from `from` in this graph.
    pub fn reachable_from(&self, from: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &self.succ[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Number of MD strategies for `player`, saturating at `u64::MAX`.
    pub fn strategy_count(&self, player: Player) -> u64 {
        self.owned_by(player).iter().fold(1u64, |acc, &v| {
            acc.saturating_mul(self.succ[v].len() as u64)
        })
    }
}

/// A memoryless deterministic strategy: one successor for every vertex the
/// player owns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strategy {
    player: Player,
    choices: Vec<Option<StateId>>,
}

impl Strategy {
    pub fn new(game: &Game, player: Player, choices: Vec<Option<StateId>>) -> Result<Self> {
        let s = Self { player, choices };
        s.validate(game)?;
        Ok(s)
    }

    pub fn from_map(
        game: &Game,
        player: Player,
        choices: &BTreeMap<StateId, StateId>,
    ) -> Result<Self> {
        let mut vec = vec![None; game.len()];
        for (&v, &c) in choices {
            if v >= game.len() {
                return Err(Error::InvalidStrategy(format!(
                    "vertex index {v} is out of range"
                )));
            }
            vec[v] = Some(c);
        }
        Self::new(game, player, vec)
    }

    pub fn from_names(
        game: &Game,
        player: Player,
        choices: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (v, c) in choices {
            let v = game.id(v).ok_or_else(|| Error::UnknownId(v.clone()))?;
            let c = game.id(c).ok_or_else(|| Error::UnknownId(c.clone()))?;
            map.insert(v, c);
        }
        Self::from_map(game, player, &map)
    }

    /// The strategy picking the first (lowest-index) successor everywhere.
    pub fn first_choices(game: &Game, player: Player) -> Self {
        let choices = (0..game.len())
            .map(|v| game.is_owned_by(v, player).then(|| game.successors(v)[0]))
            .collect();
        Self { player, choices }
    }

    pub fn validate(&self, game: &Game) -> Result<()> {
        if self.choices.len() != game.len() {
            return Err(Error::InvalidStrategy(
                "strategy and game sizes differ".into(),
            ));
        }
        for v in 0..game.len() {
            match (game.is_owned_by(v, self.player), self.choices[v]) {
                (true, None) => {
                    return Err(Error::InvalidStrategy(format!(
                        "no choice at owned vertex `{}`",
                        game.name(v)
                    )))
                }
                (false, Some(_)) => {
                    return Err(Error::InvalidStrategy(format!(
                        "choice at vertex `{}` which {} does not own",
                        game.name(v),
                        self.player
                    )))
                }
                (true, Some(c)) if game.successors(v).binary_search(&c).is_err() => {
                    return Err(Error::InvalidStrategy(format!(
                        "`{}` is not a successor of `{}`",
                        game.name(c.min(game.len() - 1)),
                        game.name(v)
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn choice(&self, v: StateId) -> Option<StateId> {
        self.choices.get(v).copied().flatten()
    }

    pub fn choices(&self) -> &[Option<StateId>] {
        &self.choices
    }

    /// Copy of this strategy with the choice at `v` replaced.
    pub fn with_choice(&self, v: StateId, target: StateId) -> Self {
        let mut s = self.clone();
        s.choices[v] = Some(target);
        s
    }

    /// Owned vertices where the two strategies choose differently.
    pub fn disagreements(&self, other: &Strategy) -> Vec<StateId> {
        (0..self.choices.len())
            .filter(|&v| self.choices[v] != other.choices[v])
            .collect()
    }

    /// Choices as a name map, the form used by strategy files.
    pub fn to_name_map(&self, game: &Game) -> BTreeMap<String, String> {
        self.choices
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| (game.name(v).to_string(), game.name(c).to_string())))
            .collect()
    }

    /// Every MD strategy for `player`, in lexicographic order of the choice
    /// vectors.
    pub fn enumerate(game: &Game, player: Player) -> StrategyIter<'_> {
        let owned = game.owned_by(player);
        StrategyIter {
            game,
            player,
            owned,
            digits: None,
            done: false,
        }
    }
}

/// Iterator behind [`Strategy::enumerate`].
pub struct StrategyIter<'a> {
    game: &'a Game,
    player: Player,
    owned: Vec<StateId>,
    digits: Option<Vec<usize>>,
    done: bool,
}

impl Iterator for StrategyIter<'_> {
    type Item = Strategy;

    fn next(&mut self) -> Option<Strategy> {
        if self.done {
            return None;
        }
        let digits = match &mut self.digits {
            None => self.digits.insert(vec![0; self.owned.len()]),
            Some(d) => {
                // odometer increment, last owned vertex varies fastest
                let mut i = d.len();
                loop {
                    if i == 0 {
                        self.done = true;
                        return None;
                    }
                    i -= 1;
                    d[i] += 1;
                    if d[i] < self.game.successors(self.owned[i]).len() {
                        break;
                    }
                    d[i] = 0;
                }
                d
            }
        };
        let mut choices = vec![None; self.game.len()];
        for (k, &v) in self.owned.iter().enumerate() {
            choices[v] = Some(self.game.successors(v)[digits[k]]);
        }
        Some(Strategy {
            player: self.player,
            choices,
        })
    }
}

/// A play: a finite vertex sequence ending in an effect vertex, or an
/// infinite one given as `stem · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Play {
    pub stem: Vec<StateId>,
    pub cycle: Vec<StateId>,
}

impl Play {
    pub fn finite(stem: Vec<StateId>) -> Self {
        Self {
            stem,
            cycle: Vec::new(),
        }
    }

    pub fn lasso(stem: Vec<StateId>, cycle: Vec<StateId>) -> Self {
        Self { stem, cycle }
    }

    pub fn is_finite(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Stem followed by one unrolling of the cycle and the cycle's first
    /// vertex again, so that every move of the play appears as a window.
    pub fn unrolled(&self) -> Vec<StateId> {
        let mut seq = self.stem.clone();
        seq.extend_from_slice(&self.cycle);
        if let Some(&c0) = self.cycle.first() {
            seq.push(c0);
        }
        seq
    }

    pub fn validate(&self, game: &Game) -> Result<()> {
        let seq = self.unrolled();
        let Some(&first) = seq.first() else {
            return Err(Error::NotAPath("empty play".into()));
        };
        if seq.iter().any(|&v| v >= game.len()) {
            return Err(Error::NotAPath("vertex index out of range".into()));
        }
        if first != game.initial() {
            return Err(Error::NotAPath(
                "play does not start at the initial vertex".into(),
            ));
        }
        for w in seq.windows(2) {
            if game.successors(w[0]).binary_search(&w[1]).is_err() {
                return Err(Error::NotAPath(format!(
                    "no edge `{}` -> `{}`",
                    game.name(w[0]),
                    game.name(w[1])
                )));
            }
        }
        if self.is_finite() && !game.is_effect(*seq.last().unwrap()) {
            return Err(Error::NotMaximal(
                "finite play does not end in an effect vertex".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Game {
        // r (safe) -> a, b ; a (reach) -> e, a ; b (reach) -> a, e ; e effect
        Game::from_indices(
            vec!["r".into(), "a".into(), "b".into(), "e".into()],
            vec![Owner::Safe, Owner::Reach, Owner::Reach, Owner::Effect],
            0,
            &[(0, 1), (0, 2), (1, 1), (1, 3), (2, 1), (2, 3)],
        )
        .unwrap()
    }

    #[test]
    fn rejects_effect_with_edge_and_dead_end() {
        let err = Game::from_indices(
            vec!["r".into(), "e".into()],
            vec![Owner::Reach, Owner::Effect],
            0,
            &[(0, 1), (1, 0)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidModel(m) if m.contains("effect vertex")));
        let err = Game::from_indices(
            vec!["r".into(), "d".into(), "e".into()],
            vec![Owner::Reach, Owner::Safe, Owner::Effect],
            0,
            &[(0, 1), (0, 2)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidModel(m) if m.contains("no outgoing")));
    }

    #[test]
    fn restriction_keeps_only_chosen_edges() {
        let g = small();
        let s = Strategy::from_map(&g, Player::Reach, &BTreeMap::from([(1, 1), (2, 3)])).unwrap();
        let r = g.restrict(&s);
        assert_eq!(r.successors(1), &[1]);
        assert_eq!(r.successors(2), &[3]);
        assert_eq!(r.successors(0), &[1, 2]);
        // strategy of the player owning only r
        let t = Strategy::from_map(&g, Player::Safe, &BTreeMap::from([(0, 2)])).unwrap();
        assert_eq!(g.restrict(&t).successors(1), g.successors(1));
    }

    #[test]
    fn strategy_validation() {
        let g = small();
        assert!(Strategy::from_map(&g, Player::Reach, &BTreeMap::from([(1, 1)])).is_err());
        assert!(Strategy::from_map(&g, Player::Reach, &BTreeMap::from([(1, 1), (2, 2)])).is_err());
        assert!(
            Strategy::from_map(&g, Player::Reach, &BTreeMap::from([(0, 1), (1, 1), (2, 3)]))
                .is_err()
        );
    }

    #[test]
    fn enumeration_covers_product_of_degrees() {
        let g = small();
        let all: Vec<_> = Strategy::enumerate(&g, Player::Reach).collect();
        assert_eq!(all.len() as u64, g.strategy_count(Player::Reach));
        assert_eq!(all.len(), 4);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 4);
        assert_eq!(Strategy::enumerate(&g, Player::Safe).count(), 2);
    }

    #[test]
    fn play_validation() {
        let g = small();
        assert!(Play::finite(vec![0, 1, 3]).validate(&g).is_ok());
        assert!(Play::lasso(vec![0], vec![1]).validate(&g).is_ok());
        assert!(Play::finite(vec![0, 1]).validate(&g).is_err());
        assert!(Play::lasso(vec![0, 2], vec![3]).validate(&g).is_err());
    }

    #[test]
    fn sinks_do_not_break_acyclicity() {
        let g = Game::from_indices(
            vec!["r".into(), "s".into(), "e".into()],
            vec![Owner::Reach, Owner::Safe, Owner::Effect],
            0,
            &[(0, 1), (0, 2), (1, 1)],
        )
        .unwrap();
        assert!(g.is_sink(1));
        assert!(g.is_acyclic());
        assert!(!small().is_acyclic());
    }
}
