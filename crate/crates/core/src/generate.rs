//! Seeded random instances and exhaustive enumerations used by the test
//! suites and the `gen` command. The same spec and seed always produce the
//! same instance.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Game, Owner, Player, StateId, StateSet, Strategy, TransitionSystem};
use crate::sem_bridge::{evaluate_default, EffectSpec, Sem};
use crate::ts_causality::Phi;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    LayeredTs,
    AcyclicTs,
    AcyclicGame,
    CyclicGame,
    BooleanSem,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::LayeredTs => "layered-ts",
            Family::AcyclicTs => "acyclic-ts",
            Family::AcyclicGame => "acyclic-game",
            Family::CyclicGame => "cyclic-game",
            Family::BooleanSem => "boolean-sem",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            Family::LayeredTs,
            Family::AcyclicTs,
            Family::AcyclicGame,
            Family::CyclicGame,
            Family::BooleanSem,
        ]
        .into_iter()
        .find(|f| f.name() == s)
        .ok_or_else(|| Error::InvalidSpec(format!("unknown family `{s}`")))
    }
}

/// What to generate.
///
/// `size` bounds the number of states or vertices, is the number of layers
/// for `layered-ts` and the number of variables for `boolean-sem`. `width`
/// bounds the states per layer and `alphabet` the number of label symbols
/// of transition systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub size: usize,
    pub width: usize,
    pub alphabet: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, size: usize, seed: u64) -> Self {
        Self {
            family,
            size,
            width: 3,
            alphabet: 2,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        match self.family {
            Family::LayeredTs if self.size == 0 || self.width == 0 => {
                bad("layered-ts needs size >= 1 and width >= 1")
            }
            Family::AcyclicTs if self.size == 0 => bad("acyclic-ts needs size >= 1"),
            Family::AcyclicGame | Family::CyclicGame if self.size < 2 => {
                bad("games need size >= 2")
            }
            Family::BooleanSem if self.size == 0 || self.size > 16 => {
                bad("boolean-sem needs 1 <= size <= 16")
            }
            Family::LayeredTs | Family::AcyclicTs if self.alphabet == 0 => {
                bad("the alphabet must not be empty")
            }
            _ if self.size > 10_000 => bad("size is limited to 10000"),
            _ => Ok(()),
        }
    }
}

/// A generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Ts(TransitionSystem),
    Game(Game),
    Sem(Sem, EffectSpec),
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    spec.validate()?;
    let mut r = rng(spec.seed);
    Ok(match spec.family {
        Family::LayeredTs => Instance::Ts(layered_ts(&mut r, spec.size, spec.width, spec.alphabet)),
        Family::AcyclicTs => Instance::Ts(acyclic_ts(&mut r, spec.size, spec.alphabet)),
        Family::AcyclicGame => Instance::Game(game(&mut r, spec.size, false)),
        Family::CyclicGame => Instance::Game(game(&mut r, spec.size, true)),
        Family::BooleanSem => {
            let (sem, effect) = boolean_sem(&mut r, spec.size);
            Instance::Sem(sem, effect)
        }
    })
}

fn alphabet(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| ((b'a' + (i % 26) as u8) as char).to_string() + &"'".repeat(i / 26))
        .collect()
}

fn ts_from_parts(k: usize, labels: Vec<usize>, edges: &[(StateId, StateId)]) -> TransitionSystem {
    let names = (0..labels.len()).map(|i| format!("s{i}")).collect();
    TransitionSystem::from_indices(alphabet(k), names, labels, 0, edges)
        .expect("generated systems are well formed")
}

/// A layered system with `layers` layers (the first holds only the initial
/// state) and up to `width` states in every other layer. Every state is
/// reachable and every non-last state has a successor.
pub fn layered_ts(r: &mut impl Rng, layers: usize, width: usize, k: usize) -> TransitionSystem {
    let mut labels = vec![r.gen_range(0..k)];
    let mut prev: Vec<StateId> = vec![0];
    let mut edges = Vec::new();
    for _ in 1..layers {
        let size = r.gen_range(1..=width);
        let layer: Vec<StateId> = (labels.len()..labels.len() + size).collect();
        labels.extend((0..size).map(|_| r.gen_range(0..k)));
        for &t in &layer {
            edges.push((*prev.choose(r).unwrap(), t));
        }
        for &s in &prev {
            if !edges.iter().any(|&(a, _)| a == s) {
                edges.push((s, *layer.choose(r).unwrap()));
            }
            for &t in &layer {
                if r.gen_bool(0.3) {
                    edges.push((s, t));
                }
            }
        }
        prev = layer;
    }
    ts_from_parts(k, labels, &edges)
}

/// An acyclic system on up to `max_states` states; edges only go from lower
/// to higher indices.
pub fn acyclic_ts(r: &mut impl Rng, max_states: usize, k: usize) -> TransitionSystem {
    let n = r.gen_range(1.min(max_states)..=max_states).max(1);
    let labels = (0..n).map(|_| r.gen_range(0..k)).collect();
    let mut edges = Vec::new();
    for s in 0..n.saturating_sub(1) {
        if s > 0 && r.gen_bool(0.25) {
            continue;
        }
        let out = r.gen_range(1..=3.min(n - 1 - s));
        let mut targets: Vec<StateId> = (s + 1..n).collect();
        targets.shuffle(r);
        edges.extend(targets[..out].iter().map(|&t| (s, t)));
    }
    ts_from_parts(k, labels, &edges)
}

/// A random game on up to `max_vertices` vertices. Acyclic games only have
/// edges to higher indices, apart from sink self-loops.
pub fn game(r: &mut impl Rng, max_vertices: usize, cyclic: bool) -> Game {
    let n = r.gen_range(2..=max_vertices.max(2));
    let mut owners = Vec::with_capacity(n);
    for v in 0..n {
        let effect = v > 0 && (v == n - 1 || r.gen_bool(0.25));
        owners.push(if effect {
            Owner::Effect
        } else if r.gen_bool(0.5) {
            Owner::Reach
        } else {
            Owner::Safe
        });
    }
    let mut edges = Vec::new();
    for v in 0..n {
        if owners[v] == Owner::Effect {
            continue;
        }
        let candidates: Vec<StateId> = if cyclic {
            (0..n).collect()
        } else {
            (v + 1..n).collect()
        };
        if candidates.is_empty() || (v > 0 && r.gen_bool(0.1)) {
            edges.push((v, v));
            continue;
        }
        let out = r.gen_range(1..=3.min(candidates.len()));
        edges.extend(candidates.choose_multiple(r, out).map(|&w| (v, w)));
    }
    let names = (0..n).map(|i| format!("v{i}")).collect();
    Game::from_indices(names, owners, 0, &edges).expect("generated games are well formed")
}

/// A random Boolean model with `n` variables and an effect containing the
/// default valuation.
pub fn boolean_sem(r: &mut impl Rng, n: usize) -> (Sem, EffectSpec) {
    let tables: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..1usize << i).map(|_| r.gen_bool(0.5)).collect())
        .collect();
    let sem = Sem::new((1..=n).map(|i| format!("X{i}")).collect(), tables)
        .expect("tables have the right size");
    let default = evaluate_default(&sem);
    let mut valuations: BTreeSet<Vec<bool>> = (0..1usize << n)
        .map(|m| (0..n).map(|j| m >> j & 1 == 1).collect())
        .filter(|_| r.gen_bool(0.5))
        .collect();
    valuations.insert(default);
    (
        sem,
        EffectSpec::Valuations {
            valuations: valuations.into_iter().collect(),
        },
    )
}

/// Effect valuations of an exhaustively enumerated model: all sets that
/// contain the default valuation, given as bit masks over the `2^n`
/// valuations.
pub fn effects_containing(default: &[bool]) -> impl Iterator<Item = BTreeSet<Vec<bool>>> {
    let n = default.len();
    let total = 1usize << n;
    let all: Vec<Vec<bool>> = (0..total)
        .map(|m| (0..n).map(|j| m >> j & 1 == 1).collect())
        .collect();
    let d = all.iter().position(|v| v == default).unwrap();
    (0..1u64 << (total - 1)).map(move |mask| {
        let mut out = BTreeSet::new();
        let mut bit = 0;
        for (i, v) in all.iter().enumerate() {
            if i == d || {
                let take = mask >> bit & 1 == 1;
                bit += 1;
                take
            } {
                out.insert(v.clone());
            }
        }
        out
    })
}

/// Every Boolean model on `n` variables, by truth-table enumeration.
pub fn all_boolean_sems(n: usize) -> impl Iterator<Item = Sem> {
    let entries: usize = (0..n).map(|i| 1usize << i).sum();
    (0..1u64 << entries).map(move |bits| {
        let mut k = 0;
        let tables = (0..n)
            .map(|i| {
                (0..1usize << i)
                    .map(|_| {
                        let b = bits >> k & 1 == 1;
                        k += 1;
                        b
                    })
                    .collect()
            })
            .collect();
        Sem::new((1..=n).map(|i| format!("X{i}")).collect(), tables).unwrap()
    })
}

/// Every layered system with 2 to `layers` layers, up to `width` states per
/// non-initial layer and `k` labels in which all states are reachable, up
/// to reordering states inside a layer: each layer is listed in
/// non-decreasing order of (label, set of parents).
pub fn all_layered_ts(layers: usize, width: usize, k: usize) -> Vec<TransitionSystem> {
    let mut out = Vec::new();
    for_each_layered_ts(layers, width, k, &mut |ts| out.push(ts));
    out
}

/// Streaming form of [`all_layered_ts`].
pub fn for_each_layered_ts(
    layers: usize,
    width: usize,
    k: usize,
    visit: &mut dyn FnMut(TransitionSystem),
) {
    for root in 0..k {
        let mut acc = vec![vec![(root, 0u32)]];
        extend_layers(&mut acc, layers, width, k, visit);
    }
}

fn extend_layers(
    acc: &mut Vec<Vec<(usize, u32)>>,
    layers: usize,
    width: usize,
    k: usize,
    out: &mut dyn FnMut(TransitionSystem),
) {
    if acc.len() >= 2 {
        out(layered_from_layers(acc, k));
    }
    if acc.len() == layers {
        return;
    }
    let prev = acc.last().unwrap().len();
    let items: Vec<(usize, u32)> = (0..k)
        .flat_map(|l| (1..1u32 << prev).map(move |m| (l, m)))
        .collect();
    let full = (1u32 << prev) - 1;
    let mut idx = Vec::new();
    fn rec(
        start: usize,
        idx: &mut Vec<usize>,
        items: &[(usize, u32)],
        width: usize,
        full: u32,
        visit: &mut dyn FnMut(Vec<(usize, u32)>),
    ) {
        if !idx.is_empty() && idx.iter().fold(0, |m, &i| m | items[i].1) == full {
            visit(idx.iter().map(|&i| items[i]).collect());
        }
        if idx.len() == width {
            return;
        }
        for i in start..items.len() {
            idx.push(i);
            rec(i, idx, items, width, full, visit);
            idx.pop();
        }
    }
    let mut layers_found = Vec::new();
    rec(0, &mut idx, &items, width, full, &mut |l| {
        layers_found.push(l)
    });
    for layer in layers_found {
        acc.push(layer);
        extend_layers(acc, layers, width, k, out);
        acc.pop();
    }
}

fn layered_from_layers(layers: &[Vec<(usize, u32)>], k: usize) -> TransitionSystem {
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut prev_start = 0;
    for (i, layer) in layers.iter().enumerate() {
        let start = labels.len();
        for (j, &(label, parents)) in layer.iter().enumerate() {
            labels.push(label);
            if i > 0 {
                for p in 0..layers[i - 1].len() {
                    if parents >> p & 1 == 1 {
                        edges.push((prev_start + p, start + j));
                    }
                }
            }
        }
        prev_start = start;
    }
    ts_from_parts(k, labels, &edges)
}

/// The parts of a transition-system cause query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsQueryParts {
    pub path: Vec<StateId>,
    pub cause: StateSet,
    pub effect: StateSet,
    pub phi: Phi,
}

/// A random valid query on an acyclic system: a random maximal path `π`, an
/// effect of terminals that `π` satisfies for `Φ`, and a nonempty cause on
/// `π` disjoint from the effect. `None` if the path has no room for one.
pub fn sample_ts_query(r: &mut impl Rng, ts: &TransitionSystem) -> Option<TsQueryParts> {
    let mut path = vec![ts.initial()];
    while let Some(&next) = ts.successors(*path.last().unwrap()).choose(r) {
        path.push(next);
    }
    let last = *path.last().unwrap();
    let phi = if r.gen_bool(0.5) {
        Phi::Reach
    } else {
        Phi::Safe
    };
    let effect: StateSet = ts
        .terminals()
        .filter(|&t| match phi {
            Phi::Reach => t == last || r.gen_bool(0.5),
            Phi::Safe => t != last && r.gen_bool(0.5),
        })
        .collect();
    let candidates: Vec<StateId> = path
        .iter()
        .copied()
        .filter(|s| !effect.contains(s))
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let mut cause: StateSet = candidates
        .iter()
        .copied()
        .filter(|_| r.gen_bool(0.3))
        .collect();
    if cause.is_empty() {
        cause.insert(*candidates.choose(r).unwrap());
    }
    Some(TsQueryParts {
        path,
        cause,
        effect,
        phi,
    })
}

/// A random strategy and a random nonempty set of non-effect vertices. The
/// player is usually the winner of the game and the strategy usually a
/// losing one, and the set has one to three vertices, mostly ones the
/// strategy reaches, so that all three cause conditions are exercised.
pub fn sample_game_query(r: &mut impl Rng, game: &Game) -> (Strategy, StateSet) {
    let player = if r.gen_bool(0.75) {
        crate::game_causality::solve(game).winner(game.initial())
    } else if r.gen_bool(0.5) {
        Player::Reach
    } else {
        Player::Safe
    };
    let draw = |r: &mut _| {
        let choices = (0..game.len())
            .map(|v| {
                game.is_owned_by(v, player)
                    .then(|| *game.successors(v).choose(r).unwrap())
            })
            .collect();
        Strategy::new(game, player, choices).expect("random choices are edges")
    };
    let mut sigma = draw(r);
    for _ in 0..4 {
        if !crate::game_causality::is_winning(game, &sigma) {
            break;
        }
        sigma = draw(r);
    }
    let reach = game.restrict(&sigma).reachable_from(game.initial());
    let mut pool: Vec<StateId> = (0..game.len())
        .filter(|&v| reach[v] && v != game.initial() && !game.is_effect(v))
        .collect();
    if pool.is_empty() || r.gen_bool(0.1) {
        pool = (0..game.len()).filter(|&v| !game.is_effect(v)).collect();
    }
    let size = [1, 1, 1, 2, 2, 3][r.gen_range(0..6)];
    let cause: StateSet = pool.choose_multiple(r, size).copied().collect();
    (sigma, cause)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_layered;

    #[test]
    fn same_seed_same_instance() {
        for family in [
            Family::LayeredTs,
            Family::AcyclicTs,
            Family::AcyclicGame,
            Family::CyclicGame,
            Family::BooleanSem,
        ] {
            let spec = GeneratorSpec::new(family, 5, 17);
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        }
    }

    #[test]
    fn families_respect_their_shape() {
        for seed in 0..200 {
            let mut r = rng(seed);
            let ts = layered_ts(&mut r, 4, 3, 2);
            let (depth, len) = validate_layered(&ts).unwrap();
            assert_eq!(len, 4);
            assert!(depth.iter().all(Option::is_some));
            assert!(acyclic_ts(&mut r, 10, 2).is_acyclic());
            let g = game(&mut r, 7, false);
            assert!(g.validate().is_ok() && g.is_acyclic());
            assert!(game(&mut r, 7, true).validate().is_ok());
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(
            generate(&GeneratorSpec::new(Family::AcyclicGame, 1, 0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!("tree".parse::<Family>().is_err());
        assert_eq!("cyclic-game".parse::<Family>().unwrap(), Family::CyclicGame);
    }

    #[test]
    fn layered_enumeration_counts() {
        // two layers: root plus a nondecreasing list of 1..=2 labels
        assert_eq!(all_layered_ts(2, 2, 2).len(), 2 * (2 + 3));
        for ts in all_layered_ts(3, 2, 2) {
            let (depth, _) = validate_layered(&ts).unwrap();
            assert!(depth.iter().all(Option::is_some));
        }
    }

    #[test]
    fn sem_enumeration() {
        assert_eq!(all_boolean_sems(2).count(), 8);
        assert_eq!(effects_containing(&[true, false]).count(), 8);
        assert!(effects_containing(&[true]).all(|e| e.contains(&vec![true])));
    }

    #[test]
    fn sampled_queries_are_valid() {
        let mut r = rng(3);
        let mut found = 0;
        for _ in 0..200 {
            let ts = acyclic_ts(&mut r, 8, 2);
            if let Some(q) = sample_ts_query(&mut r, &ts) {
                assert!(q
                    .cause
                    .iter()
                    .all(|c| q.path.contains(c) && !q.effect.contains(c)));
                assert!(q.effect.iter().all(|&e| ts.is_terminal(e)));
                found += 1;
            }
        }
        assert!(found > 100);
    }
}
