use std::collections::BTreeSet;
use std::path::Path;

use serde_json::{json, Value};

use causekit::distances::{
    d_ghamm, d_hamm_s, d_lev, d_pref_ap, d_pref_hausdorff, dstar, dstrat, hamming, Budget, Distance,
};
use causekit::game_causality::{
    brute_force_check_cause, check_cause_game, extract_explanation, is_explanation,
    is_minimal_explanation, min_dstar_winning_strategy_acyclic, min_winning_distance, solve,
    GameCauseQuery, GameCauseVerdict, GameMetric,
};
use causekit::generate::{generate, Family, GeneratorSpec, Instance};
use causekit::io::{
    model_to_json, parse_model, parse_path, parse_sem, parse_strategy, sem_to_json,
};
use causekit::model::{Game, Player, StateSet, Strategy, TransitionSystem};
use causekit::sem_bridge::{bridge_check, but_for_causes, is_but_for_cause, Sem, Valuation};
use causekit::ts_causality::{
    brute_force_check, check_cause, CauseQuery, CauseVerdict, Phi, TsMetric,
};
use causekit::Error;

use crate::document::{Doc, Failure, Output};
use crate::{
    Cli, Command, DistanceCommand, ExplainArgs, GameCauseArgs, GenArgs, OracleCommand, SemCommand,
    TsCauseArgs,
};

type Run = Result<Output, Failure>;

pub fn run(cli: &Cli) -> Run {
    let mut budget = Budget::new(cli.budget);
    match &cli.command {
        Command::TsCause(a) => ts_cause(cli, a, None, false, &mut budget),
        Command::GameCause(a) => game_cause(a, false, &mut budget),
        Command::Explain(a) => explain(a, &mut budget),
        Command::Solve(a) => solve_cmd(&a.model),
        Command::Distance(d) => distance(d, &mut budget),
        Command::Sem(s) => sem(s),
        Command::Oracle(OracleCommand::TsCause { args, bound }) => {
            ts_cause(cli, args, *bound, true, &mut budget)
        }
        Command::Oracle(OracleCommand::GameCause(a)) => game_cause(a, true, &mut budget),
        Command::Gen(a) => gen(cli, a),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn show(path: &Path) -> String {
    path.display().to_string()
}

fn split(list: &str) -> Vec<&str> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn load_ts(path: &Path) -> Result<TransitionSystem, Failure> {
    Ok(parse_model(&read(path)?)?.into_ts()?)
}

fn load_game(path: &Path) -> Result<Game, Failure> {
    Ok(parse_model(&read(path)?)?.into_game()?)
}

fn parse_player(s: &str) -> Result<Player, Failure> {
    match s {
        "reach" => Ok(Player::Reach),
        "safe" => Ok(Player::Safe),
        _ => Err(Failure::Usage(format!(
            "unknown player `{s}` (expected reach or safe)"
        ))),
    }
}

fn distance_value(d: Distance) -> Value {
    serde_json::to_value(d).expect("distances serialize")
}

fn strategy_value(game: &Game, s: &Strategy) -> Value {
    json!({ "player": s.player().to_string(), "choices": s.to_name_map(game) })
}

fn names<'a>(all: impl Fn(usize) -> &'a str, set: impl IntoIterator<Item = usize>) -> Vec<String> {
    set.into_iter().map(|v| all(v).to_string()).collect()
}

fn ts_cause(
    cli: &Cli,
    a: &TsCauseArgs,
    bound: Option<usize>,
    oracle: bool,
    budget: &mut Budget,
) -> Run {
    let ts = load_ts(&a.model)?;
    let path = parse_path(&ts, &read(&a.path)?)?;
    let cause: StateSet = ts.ids(&split(&a.cause))?.into_iter().collect();
    let effect: StateSet = ts.ids(&split(&a.effect))?.into_iter().collect();
    let phi: Phi = a.phi.parse()?;
    let metric: TsMetric = a.metric.parse()?;
    let q = CauseQuery::new(&ts, path.states().to_vec(), cause, effect, phi, metric)
        .with_witnesses(cli.witnesses);
    let verdict = if oracle {
        brute_force_check(&q, bound, budget)?
    } else {
        check_cause(&q)?
    };
    let args = json!({
        "model": show(&a.model), "path": show(&a.path), "cause": a.cause, "effect": a.effect,
        "phi": a.phi, "metric": a.metric, "witnesses": cli.witnesses, "bound": bound,
    });
    Ok(ts_document(
        if oracle {
            "oracle ts-cause"
        } else {
            "ts-cause"
        },
        args,
        &ts,
        &verdict,
        budget,
    ))
}

fn ts_document(
    name: &str,
    args: Value,
    ts: &TransitionSystem,
    v: &CauseVerdict,
    budget: &Budget,
) -> Output {
    let witnesses: Vec<Value> = v
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "path": names(|s| ts.name(s), w.path.states.iter().copied()),
                "loopStart": w.path.loop_start,
                "distance": distance_value(w.distance),
                "satisfiesPhi": w.satisfies_phi,
            })
        })
        .collect();
    Doc::new(name, args)
        .set("avoidable", v.avoidable)
        .set("isCause", v.is_cause)
        .set(
            "minDistance",
            v.min_distance.map_or(Value::Null, distance_value),
        )
        .set("witnesses", witnesses)
        .budget(budget.used(), budget.limit())
        .finish(v.is_cause)
}

fn game_cause(a: &GameCauseArgs, oracle: bool, budget: &mut Budget) -> Run {
    let game = load_game(&a.model)?;
    let player = parse_player(&a.player)?;
    let sigma = parse_strategy(&game, &read(&a.strategy)?, Some(player))?;
    let cause: StateSet = game.ids(&split(&a.cause))?.into_iter().collect();
    let metric: GameMetric = a.metric.parse()?;
    let q = GameCauseQuery::new(&game, sigma, cause, metric);
    let v: GameCauseVerdict = if oracle {
        brute_force_check_cause(&q, budget)?
    } else {
        check_cause_game(&q, budget)?
    };
    let args = json!({
        "model": show(&a.model), "player": a.player, "strategy": show(&a.strategy),
        "cause": a.cause, "metric": a.metric,
    });
    Ok(Doc::new(
        if oracle {
            "oracle game-cause"
        } else {
            "game-cause"
        },
        args,
    )
    .set("isCause", v.is_cause)
    .set("losingPlayThroughCause", v.losing_play_through_cause)
    .set("avoidable", v.avoidable)
    .set(
        "minDistance",
        v.min_distance.map_or(Value::Null, distance_value),
    )
    .set(
        "witnesses",
        v.witness
            .iter()
            .map(|w| strategy_value(&game, w))
            .collect::<Vec<_>>(),
    )
    .set("witnessWins", v.witness_wins)
    .budget(budget.used(), budget.limit())
    .finish(v.is_cause))
}

fn vertex_set(game: &Game, list: &str) -> Result<BTreeSet<usize>, Failure> {
    Ok(game.ids(&split(list))?.into_iter().collect())
}

fn explain(a: &ExplainArgs, budget: &mut Budget) -> Run {
    let game = load_game(&a.model)?;
    let player = a.player.as_deref().map(parse_player).transpose()?;
    let sigma = parse_strategy(&game, &read(&a.strategy)?, player)?;
    let metric = a
        .metric
        .as_deref()
        .map(str::parse::<GameMetric>)
        .transpose()?;
    let need_metric =
        || metric.ok_or_else(|| Failure::Usage("this mode needs --metric hamm-s or dstar".into()));
    let args = json!({
        "model": show(&a.model), "strategy": show(&a.strategy), "player": a.player, "cause": a.cause,
        "check": a.check, "checkMinimal": a.check_minimal, "minDistance": a.min_distance,
        "minDstarAcyclic": a.min_dstar_acyclic, "metric": a.metric, "threshold": a.threshold,
    });
    let doc = Doc::new("explain", args);
    let vertices = |set: &BTreeSet<usize>| names(|v| game.name(v), set.iter().copied());
    if let Some(e) = &a.check {
        let set = vertex_set(&game, e)?;
        let witness = is_explanation(&game, &sigma, &set)?;
        return Ok(doc
            .set("mode", "check")
            .set("vertices", vertices(&set))
            .set(
                "witnesses",
                witness
                    .iter()
                    .map(|w| strategy_value(&game, w))
                    .collect::<Vec<_>>(),
            )
            .finish(witness.is_some()));
    }
    if let Some(e) = &a.check_minimal {
        let set = vertex_set(&game, e)?;
        let minimal = is_minimal_explanation(&game, &sigma, &set, need_metric()?, budget)?;
        return Ok(doc
            .set("mode", "check-minimal")
            .set("vertices", vertices(&set))
            .budget(budget.used(), budget.limit())
            .finish(minimal));
    }
    if a.min_distance {
        let found = min_winning_distance(&game, &sigma, need_metric()?, a.threshold, budget);
        return match found {
            Ok(w) => Ok(doc
                .set("mode", "min-distance")
                .set("minDistance", w.distance)
                .set("exact", w.exact)
                .set("witnesses", vec![strategy_value(&game, &w.strategy)])
                .budget(budget.used(), budget.limit())
                .finish(true)),
            Err(Error::NoWinningStrategy) => Ok(doc.set("mode", "min-distance").finish(false)),
            Err(e) => Err(e.into()),
        };
    }
    if a.min_dstar_acyclic {
        let found = min_dstar_winning_strategy_acyclic(&game, &sigma, budget);
        return match found {
            Ok(m) => Ok(doc
                .set("mode", "min-dstar-acyclic")
                .set("minDistance", m.distance)
                .set("certified", m.certified)
                .set("witnesses", vec![strategy_value(&game, &m.strategy)])
                .budget(budget.used(), budget.limit())
                .finish(true)),
            Err(Error::NoWinningStrategy) => Ok(doc.set("mode", "min-dstar-acyclic").finish(false)),
            Err(e) => Err(e.into()),
        };
    }
    let cause = vertex_set(&game, a.cause.as_deref().unwrap_or(""))?;
    match extract_explanation(&game, &sigma, &cause) {
        Ok(ex) => Ok(doc
            .set("mode", "extract")
            .set("vertices", vertices(&ex.vertices))
            .set("witnesses", vec![strategy_value(&game, &ex.witness)])
            .finish(true)),
        Err(Error::NoWinningStrategy) => Ok(doc.set("mode", "extract").finish(false)),
        Err(e) => Err(e.into()),
    }
}

fn solve_cmd(model: &Path) -> Run {
    let game = load_game(model)?;
    let analysis = solve(&game);
    let region = |p| {
        names(
            |v| game.name(v),
            (0..game.len()).filter(|&v| analysis.region(p)[v]),
        )
    };
    let winner = analysis.winner(game.initial());
    Ok(Doc::new("solve", json!({ "model": show(model) }))
        .set("winner", winner.to_string())
        .set("reachRegion", region(Player::Reach))
        .set("safeRegion", region(Player::Safe))
        .set(
            "reachStrategy",
            strategy_value(&game, analysis.strategy(Player::Reach)),
        )
        .set(
            "safeStrategy",
            strategy_value(&game, analysis.strategy(Player::Safe)),
        )
        .finish(winner == Player::Reach))
}

fn symbols(word: &str) -> Vec<String> {
    if word.contains(',') {
        split(word).into_iter().map(String::from).collect()
    } else {
        word.chars().map(String::from).collect()
    }
}

fn distance(d: &DistanceCommand, budget: &mut Budget) -> Run {
    match d {
        DistanceCommand::Words {
            metric,
            left,
            right,
        } => {
            let (u, v) = (symbols(left), symbols(right));
            let args = json!({ "metric": metric, "left": left, "right": right });
            let doc = Doc::new("distance words", args);
            let (value, extra) = match metric.as_str() {
                "pref-ap" => (distance_value(d_pref_ap(&u, &v)), Value::Null),
                "hamm" => (json!(hamming(&u, &v)?), Value::Null),
                "ghamm" => (json!(d_ghamm(&u, &v)), Value::Null),
                "lev" => {
                    let (value, seq) = d_lev(&u, &v);
                    let eps = |s: &Option<String>| s.clone().unwrap_or_else(|| "ε".into());
                    let seq: Vec<Value> = seq
                        .symbols
                        .iter()
                        .map(|s| json!([eps(&s.left), eps(&s.right)]))
                        .collect();
                    (json!(value), Value::from(seq))
                }
                other => return Err(Failure::Usage(format!("unknown word metric `{other}`"))),
            };
            Ok(doc
                .set("distance", value)
                .set("editSequence", extra)
                .finish(true))
        }
        DistanceCommand::Strategies {
            model,
            metric,
            left,
            right,
        } => {
            let game = load_game(model)?;
            let sigma = parse_strategy(&game, &read(left)?, None)?;
            let tau = parse_strategy(&game, &read(right)?, Some(sigma.player()))?;
            let value = match metric.as_str() {
                "pref-h" => distance_value(d_pref_hausdorff(&game, &sigma, &tau)?),
                "hamm-s" => json!(d_hamm_s(&sigma, &tau)?),
                "dstar" => json!(dstar(&game, &sigma, &tau, budget)?),
                "dstrat" => json!(dstrat(&game, &sigma, &tau, budget)?),
                other => return Err(Failure::Usage(format!("unknown strategy metric `{other}`"))),
            };
            let args = json!({ "model": show(model), "metric": metric, "left": show(left), "right": show(right) });
            Ok(Doc::new("distance strategies", args)
                .set("distance", value)
                .budget(budget.used(), budget.limit())
                .finish(true))
        }
    }
}

fn variable_set(sem: &Sem, list: &str) -> Result<BTreeSet<usize>, Failure> {
    split(list)
        .into_iter()
        .map(|v| {
            sem.variable_index(v)
                .ok_or_else(|| Failure::Core(Error::UnknownId(v.to_string())))
        })
        .collect()
}

fn variable_names(sem: &Sem, set: &BTreeSet<usize>) -> Vec<String> {
    set.iter().map(|&i| sem.variables()[i].clone()).collect()
}

fn sem(s: &SemCommand) -> Run {
    let (file, vars, bridge) = match s {
        SemCommand::Butfor { sem, vars } => (sem, vars, false),
        SemCommand::Bridge { sem, vars } => (sem, vars, true),
    };
    let (model, spec) = parse_sem(&read(file)?)?;
    let effect: BTreeSet<Valuation> = spec.expand(&model)?;
    let args = json!({ "sem": show(file), "vars": vars });
    let name = if bridge { "sem bridge" } else { "sem butfor" };
    let candidates = match vars {
        Some(list) => {
            let x = variable_set(&model, list)?;
            if !bridge {
                let yes = is_but_for_cause(&model, &effect, &x)?;
                return Ok(Doc::new(name, args)
                    .set("vars", variable_names(&model, &x))
                    .finish(yes));
            }
            vec![x]
        }
        None => but_for_causes(&model, &effect)?,
    };
    if !bridge {
        let list: Vec<Vec<String>> = candidates
            .iter()
            .map(|x| variable_names(&model, x))
            .collect();
        let any = !list.is_empty();
        return Ok(Doc::new(name, args).set("butForCauses", list).finish(any));
    }
    let mut results = Vec::new();
    let mut all = true;
    for x in &candidates {
        let is_butfor = is_but_for_cause(&model, &effect, x)?;
        let verdict = bridge_check(&model, &effect, x);
        let (is_cause, min) = match &verdict {
            Ok(v) => (
                v.is_cause,
                v.min_distance.map_or(Value::Null, distance_value),
            ),
            Err(Error::PreconditionViolated(_)) => (false, Value::Null),
            Err(e) => return Err(e.clone().into()),
        };
        all &= !is_butfor || is_cause;
        results.push(json!({
            "vars": variable_names(&model, x), "butFor": is_butfor, "isCause": is_cause, "minDistance": min,
        }));
    }
    Ok(Doc::new(name, args).set("checks", results).finish(all))
}

fn gen(cli: &Cli, a: &GenArgs) -> Run {
    let family: Family = a.family.parse()?;
    let spec = GeneratorSpec {
        family,
        size: a.size,
        width: a.width,
        alphabet: a.alphabet,
        seed: cli.seed,
    };
    let text = match generate(&spec)? {
        Instance::Ts(ts) => model_to_json(&ts.into()),
        Instance::Game(g) => model_to_json(&g.into()),
        Instance::Sem(sem, effect) => sem_to_json(&sem, &effect),
    };
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            let args = json!({
                "family": a.family, "size": a.size, "width": a.width, "alphabet": a.alphabet,
                "seed": cli.seed, "out": show(path),
            });
            Ok(Doc::new("gen", args).finish(true))
        }
        None => Ok(Output::raw(text)),
    }
}
