//! JSON file formats for models, strategies, paths and structural equation
//! models.
//!
//! A model document has `kind` set to `"ts"` or `"game"`:
//!
//! ```json
//! {"kind": "ts", "alphabet": ["a", "b"], "initial": "s0",
//!  "states": [{"id": "s0", "label": "a"}, {"id": "s1", "label": "b"}],
//!  "transitions": [["s0", "s1"]]}
//! {"kind": "game", "initial": "v0",
//!  "vertices": [{"id": "v0", "owner": "reach"}, {"id": "t", "owner": "effect"}],
//!  "edges": [["v0", "t"]]}
//! ```
//!
//! Strategies are `{"player": "reach", "choices": {"v0": "t"}}` and paths
//! are plain lists of state ids. Serialization is deterministic: fields
//! appear in a fixed order and maps are sorted.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    validate_maximal_path, Game, MaximalFinitePath, Owner, Player, Strategy, TransitionSystem,
};
use crate::sem_bridge::{EffectSpec, Sem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDoc {
    pub id: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: String,
    pub owner: Owner,
}

/// The on-disk shape of a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelDoc {
    Ts {
        alphabet: Vec<String>,
        initial: String,
        states: Vec<StateDoc>,
        transitions: Vec<(String, String)>,
    },
    Game {
        initial: String,
        vertices: Vec<VertexDoc>,
        edges: Vec<(String, String)>,
    },
}

/// A parsed and validated model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Ts(TransitionSystem),
    Game(Game),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Ts(_) => "ts",
            Model::Game(_) => "game",
        }
    }

    pub fn into_ts(self) -> Result<TransitionSystem> {
        match self {
            Model::Ts(ts) => Ok(ts),
            Model::Game(_) => Err(Error::InvalidModel(
                "expected a transition system, found a game".into(),
            )),
        }
    }

    pub fn into_game(self) -> Result<Game> {
        match self {
            Model::Game(g) => Ok(g),
            Model::Ts(_) => Err(Error::InvalidModel(
                "expected a game, found a transition system".into(),
            )),
        }
    }
}

impl From<TransitionSystem> for Model {
    fn from(ts: TransitionSystem) -> Self {
        Model::Ts(ts)
    }
}

impl From<Game> for Model {
    fn from(g: Game) -> Self {
        Model::Game(g)
    }
}

impl ModelDoc {
    pub fn into_model(self) -> Result<Model> {
        match self {
            ModelDoc::Ts {
                alphabet,
                initial,
                states,
                transitions,
            } => {
                let states = states.into_iter().map(|s| (s.id, s.label)).collect();
                Ok(Model::Ts(TransitionSystem::new(
                    alphabet,
                    states,
                    &initial,
                    &transitions,
                )?))
            }
            ModelDoc::Game {
                initial,
                vertices,
                edges,
            } => {
                let vertices = vertices.into_iter().map(|v| (v.id, v.owner)).collect();
                Ok(Model::Game(Game::new(vertices, &initial, &edges)?))
            }
        }
    }

    pub fn from_model(model: &Model) -> Self {
        match model {
            Model::Ts(ts) => ModelDoc::Ts {
                alphabet: ts.alphabet().to_vec(),
                initial: ts.name(ts.initial()).to_string(),
                states: (0..ts.len())
                    .map(|s| StateDoc {
                        id: ts.name(s).to_string(),
                        label: ts.label_name(s).to_string(),
                    })
                    .collect(),
                transitions: ts
                    .edges()
                    .map(|(a, b)| (ts.name(a).to_string(), ts.name(b).to_string()))
                    .collect(),
            },
            Model::Game(g) => ModelDoc::Game {
                initial: g.name(g.initial()).to_string(),
                vertices: (0..g.len())
                    .map(|v| VertexDoc {
                        id: g.name(v).to_string(),
                        owner: g.owner(v),
                    })
                    .collect(),
                edges: g
                    .edges()
                    .map(|(a, b)| (g.name(a).to_string(), g.name(b).to_string()))
                    .collect(),
            },
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn parse_model(text: &str) -> Result<Model> {
    parse::<ModelDoc>(text, "model")?.into_model()
}

pub fn model_to_json(model: &Model) -> String {
    render(&ModelDoc::from_model(model))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub player: Player,
    pub choices: BTreeMap<String, String>,
}

/// Parses a strategy for `game`. The document may name its player; if
/// `player` is given as well the two must agree.
pub fn parse_strategy(game: &Game, text: &str, player: Option<Player>) -> Result<Strategy> {
    let doc: StrategyDoc = parse(text, "strategy")?;
    if let Some(p) = player {
        if p != doc.player {
            return Err(Error::InvalidStrategy(format!(
                "strategy belongs to {}, expected {p}",
                doc.player
            )));
        }
    }
    Strategy::from_names(game, doc.player, &doc.choices)
}

pub fn strategy_to_json(game: &Game, strategy: &Strategy) -> String {
    render(&StrategyDoc {
        player: strategy.player(),
        choices: strategy.to_name_map(game),
    })
}

pub fn parse_path(ts: &TransitionSystem, text: &str) -> Result<MaximalFinitePath> {
    let names: Vec<String> = parse(text, "path")?;
    let ids = ts.ids(&names)?;
    validate_maximal_path(ts, &ids)
}

pub fn path_to_json(ts: &TransitionSystem, path: &[usize]) -> String {
    render(&path.iter().map(|&s| ts.name(s)).collect::<Vec<_>>())
}

/// A structural equation model together with its effect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemDoc {
    pub variables: Vec<String>,
    pub tables: Vec<Vec<bool>>,
    pub effect: EffectSpec,
}

pub fn parse_sem(text: &str) -> Result<(Sem, EffectSpec)> {
    let doc: SemDoc = parse(text, "structural equation model")?;
    let sem = Sem::new(doc.variables, doc.tables)?;
    doc.effect.expand(&sem)?;
    Ok((sem, doc.effect))
}

pub fn sem_to_json(sem: &Sem, effect: &EffectSpec) -> String {
    render(&SemDoc {
        variables: sem.variables().to_vec(),
        tables: sem.tables().to_vec(),
        effect: effect.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TS: &str = r#"{"kind": "ts", "alphabet": ["a", "b"], "initial": "s0",
        "states": [{"id": "s0", "label": "a"}, {"id": "s1", "label": "b"}],
        "transitions": [["s0", "s1"]]}"#;

    #[test]
    fn ts_round_trip() {
        let m = parse_model(TS).unwrap();
        assert_eq!(m.kind(), "ts");
        let text = model_to_json(&m);
        assert_eq!(parse_model(&text).unwrap(), m);
        assert_eq!(model_to_json(&parse_model(&text).unwrap()), text);
    }

    #[test]
    fn game_and_strategy_round_trip() {
        let text = r#"{"kind": "game", "initial": "v0",
            "vertices": [{"id": "v0", "owner": "reach"}, {"id": "v1", "owner": "safe"}, {"id": "t", "owner": "effect"}],
            "edges": [["v0", "t"], ["v0", "v1"], ["v1", "v1"]]}"#;
        let g = parse_model(text).unwrap().into_game().unwrap();
        let s = parse_strategy(
            &g,
            r#"{"player": "reach", "choices": {"v0": "v1"}}"#,
            Some(Player::Reach),
        )
        .unwrap();
        assert_eq!(s.choice(0), Some(1));
        assert_eq!(
            parse_strategy(&g, &strategy_to_json(&g, &s), None).unwrap(),
            s
        );
        assert!(parse_strategy(&g, &strategy_to_json(&g, &s), Some(Player::Safe)).is_err());
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(parse_model("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_model(r#"{"kind": "tree"}"#),
            Err(Error::Parse(_))
        ));
        let dead_end = r#"{"kind": "game", "initial": "v0", "vertices": [{"id": "v0", "owner": "safe"}], "edges": []}"#;
        assert!(matches!(parse_model(dead_end), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn paths_are_validated() {
        let ts = parse_model(TS).unwrap().into_ts().unwrap();
        assert_eq!(
            parse_path(&ts, r#"["s0", "s1"]"#).unwrap().states(),
            &[0, 1]
        );
        assert!(matches!(
            parse_path(&ts, r#"["s0"]"#),
            Err(Error::NotMaximal(_))
        ));
        assert_eq!(
            path_to_json(&ts, &[0, 1]).trim(),
            "[\n  \"s0\",\n  \"s1\"\n]"
        );
    }

    #[test]
    fn sem_round_trip() {
        let text = r#"{"variables": ["A", "B"], "tables": [[true], [false, true]],
            "effect": {"kind": "last", "k": 1, "values": [[true]]}}"#;
        let (sem, effect) = parse_sem(text).unwrap();
        assert_eq!(
            parse_sem(&sem_to_json(&sem, &effect)).unwrap(),
            (sem, effect)
        );
    }
}
