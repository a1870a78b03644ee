//! Acceptance suite: one pass/fail line per criterion.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use causekit::distances::reference::{dstar_by_visit_orders, dstrat_by_visit_orders};
use causekit::distances::{
    d_ghamm, d_hamm_s, d_lev, d_pref_ap, d_pref_hausdorff, dstar, dstrat, hamming, Budget,
    Distance, EditSequence, EditSymbol, DEFAULT_BUDGET,
};
use causekit::game_causality::{
    brute_force_check_cause, brute_force_is_explanation, brute_force_min_winning_distance,
    check_cause_game, is_explanation, is_minimal_explanation, is_winning_by_plays,
    min_dstar_winning_strategy_acyclic, min_winning_distance, GameCauseQuery, GameMetric,
};
use causekit::generate::{
    acyclic_ts, all_boolean_sems, boolean_sem, effects_containing, for_each_layered_ts, game,
    layered_ts, rng, sample_game_query, sample_ts_query, TsQueryParts,
};
use causekit::io::{parse_model, parse_strategy};
use causekit::model::{Game, Player, StateSet, Strategy, TransitionSystem};
use causekit::sem_bridge::{bridge_check, but_for_causes, evaluate_default, Sem, Valuation};
use causekit::ts_causality::{brute_force_check, check_cause, CauseQuery, TsMetric};
use causekit::Error;
use rand::Rng;

fn root() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", ".."].iter().collect()
}

fn fixture(name: &str) -> PathBuf {
    root().join("fixtures").join(name)
}

fn causekit(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_causekit"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn budget() -> Budget {
    Budget::new(DEFAULT_BUDGET)
}

fn load_game(name: &str) -> (Game, Strategy) {
    let text = std::fs::read_to_string(fixture(&format!("{name}.json"))).unwrap();
    let g = parse_model(&text).unwrap().into_game().unwrap();
    let s = std::fs::read_to_string(fixture(&format!("{name}_sigma.json"))).unwrap();
    let sigma = parse_strategy(&g, &s, Some(Player::Reach)).unwrap();
    (g, sigma)
}

fn ids(g: &Game, names: &[&str]) -> StateSet {
    g.ids(names).unwrap().into_iter().collect()
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    check(
        start.elapsed() < limit,
        format!("took {:.1?}, limit {limit:?}", start.elapsed()),
    )
}

fn fig1_cli() -> Outcome {
    let start = Instant::now();
    let model = fixture("fig1.json");
    let path = fixture("fig1_path.json");
    let run = |metric: &str| {
        causekit(&[
            "ts-cause",
            "--model",
            model.to_str().unwrap(),
            "--path",
            path.to_str().unwrap(),
            "--cause",
            "cause",
            "--effect",
            "effect,s011",
            "--metric",
            metric,
        ])
    };
    let (ghamm_code, ghamm) = run("ghamm");
    let (pref_code, pref) = run("pref");
    let ghamm: serde_json::Value = serde_json::from_str(&ghamm).map_err(|e| e.to_string())?;
    let pref: serde_json::Value = serde_json::from_str(&pref).map_err(|e| e.to_string())?;
    check(
        ghamm_code == 0 && ghamm["isCause"] == true,
        "ghamm should report a cause with exit 0",
    )?;
    check(ghamm["minDistance"] == 0, "ghamm minDistance should be 0")?;
    check(
        pref_code == 1 && pref["isCause"] == false,
        "pref should report no cause with exit 1",
    )?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "ghamm exit 0 minDistance 0, pref exit 1, {:.0?}",
        start.elapsed()
    ))
}

fn levenshtein() -> Outcome {
    let (u, v): (Vec<char>, Vec<char>) = ("abbc".chars().collect(), "accbc".chars().collect());
    let s = |l: Option<char>, r: Option<char>| EditSymbol::new(l, r).unwrap();
    let gamma = EditSequence {
        symbols: vec![
            s(Some('a'), Some('a')),
            s(Some('b'), Some('c')),
            s(None, Some('c')),
            s(Some('b'), Some('b')),
            s(Some('c'), Some('c')),
        ],
    };
    let (d, witness) = d_lev(&u, &v);
    check(d == 2, format!("d_lev = {d}"))?;
    check(gamma.weight() == 2, "example sequence weight")?;
    gamma.validate(&u, &v).map_err(|e| e.to_string())?;
    witness.validate(&u, &v).map_err(|e| e.to_string())?;
    check(witness.weight() == 2, "witness weight")?;
    Ok("d_lev(abbc, accbc) = 2, example sequence has weight 2 and validates".into())
}

/// Compares the checker with the oracle; returns whether both decided.
fn agree(ts: &TransitionSystem, parts: &TsQueryParts, metric: TsMetric) -> Result<bool, String> {
    let q = CauseQuery::new(
        ts,
        parts.path.clone(),
        parts.cause.clone(),
        parts.effect.clone(),
        parts.phi,
        metric,
    );
    match (check_cause(&q), brute_force_check(&q, None, &mut budget())) {
        (Ok(f), Ok(s)) if f.is_cause == s.is_cause && f.min_distance == s.min_distance => Ok(true),
        (Err(a), Err(b)) if a == b => Ok(false),
        (f, s) => Err(format!(
            "{} disagrees on {ts:?} {parts:?}: {f:?} vs {s:?}",
            q.metric.name()
        )),
    }
}

fn ts_oracle() -> Outcome {
    let start = Instant::now();
    let mut systems = 0usize;
    let mut decided = [0usize; 4];
    let mut failure = None;
    let mut r = rng(3);
    for_each_layered_ts(4, 3, 2, &mut |ts| {
        if failure.is_some() {
            return;
        }
        systems += 1;
        let Some(parts) = sample_ts_query(&mut r, &ts) else {
            return;
        };
        let metrics = [
            TsMetric::Hamm,
            TsMetric::PrefAp,
            TsMetric::GHamm,
            TsMetric::Lev,
        ];
        for (i, m) in metrics.into_iter().enumerate() {
            match agree(&ts, &parts, m) {
                Ok(d) => decided[i] += usize::from(d),
                Err(e) => failure = Some(e),
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let exhaustive = start.elapsed();
    let mut random = [0usize; 4];
    let mut r = rng(4);
    for (i, m) in [
        TsMetric::Hamm,
        TsMetric::PrefAp,
        TsMetric::GHamm,
        TsMetric::Lev,
    ]
    .into_iter()
    .enumerate()
    {
        while random[i] < 1000 {
            let ts = if m == TsMetric::Hamm {
                let layers = r.gen_range(2..=4);
                layered_ts(&mut r, layers, 3, 2)
            } else {
                let k = r.gen_range(1..=3);
                acyclic_ts(&mut r, 10, k)
            };
            if ts.len() > 10 {
                continue;
            }
            let Some(parts) = sample_ts_query(&mut r, &ts) else {
                continue;
            };
            random[i] += usize::from(agree(&ts, &parts, m.clone())?);
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{systems} layered systems exhaustively ({decided:?} decided per hamm/pref-ap/ghamm/lev, {exhaustive:.0?}), \
         {random:?} random systems of <= 10 states, {:.0?} total",
        start.elapsed()
    ))
}

fn fig2_left() -> Outcome {
    let (g, sigma) = load_game("fig2_left");
    let verdict = |cause: &[&str], metric| {
        check_cause_game(
            &GameCauseQuery::new(&g, sigma.clone(), ids(&g, cause), metric),
            &mut budget(),
        )
        .unwrap()
    };
    check(
        verdict(&["v2", "v3"], GameMetric::PrefH).is_cause,
        "{v2,v3} pref-h",
    )?;
    check(
        verdict(&["v2", "v3"], GameMetric::DStar).is_cause,
        "{v2,v3} dstar",
    )?;
    check(verdict(&["v3"], GameMetric::HammS).is_cause, "{v3} hamm-s")?;
    check(
        !verdict(&["v3"], GameMetric::PrefH).is_cause,
        "{v3} should not be a pref-h cause",
    )?;
    let avoider = sigma.with_choice(g.id("v1").unwrap(), g.id("c").unwrap());
    let all: Vec<Strategy> = Strategy::enumerate(&g, Player::Reach).collect();
    let avoiding: Vec<&Strategy> = all
        .iter()
        .filter(|t| causekit::game_causality::avoids(&g, t, &ids(&g, &["v2", "v3"])))
        .collect();
    check(
        avoiding.len() == 1 && *avoiding[0] == avoider,
        "unique {v2,v3}-avoiding strategy",
    )?;
    let pref = d_pref_hausdorff(&g, &sigma, &avoider).map_err(|e| e.to_string())?;
    let star = dstar(&g, &avoider, &sigma, &mut budget()).map_err(|e| e.to_string())?;
    check(
        pref == Distance::pow2_neg(2),
        format!("pref-h distance {pref}"),
    )?;
    check(star == 1, format!("dstar distance {star}"))?;
    Ok("causes and non-causes as stated, avoider at pref-h 2^-2 and dstar 1".into())
}

fn fig2_middle() -> Outcome {
    let (g, sigma) = load_game("fig2_middle");
    let (v1, v2, eff) = (
        g.id("v1").unwrap(),
        g.id("v2").unwrap(),
        g.id("eff").unwrap(),
    );
    let e: BTreeSet<usize> = [v1, v2].into();
    let e1: BTreeSet<usize> = [v1].into();
    check(
        is_explanation(&g, &sigma, &e).unwrap().is_some(),
        "E is an explanation",
    )?;
    check(
        is_explanation(&g, &sigma, &e1).unwrap().is_some(),
        "E' is an explanation",
    )?;
    for metric in [GameMetric::HammS, GameMetric::DStar] {
        check(
            !is_minimal_explanation(&g, &sigma, &e, metric, &mut budget()).unwrap(),
            format!("E {metric}-minimal"),
        )?;
        check(
            is_minimal_explanation(&g, &sigma, &e1, metric, &mut budget()).unwrap(),
            format!("E' not {metric}-minimal"),
        )?;
        let m = min_winning_distance(&g, &sigma, metric, None, &mut budget())
            .map_err(|e| e.to_string())?;
        check(
            m.distance == 1,
            format!("{metric} min winning distance {}", m.distance),
        )?;
    }
    let tau = sigma.with_choice(v1, eff).with_choice(v2, eff);
    let h = d_hamm_s(&tau, &sigma).map_err(|e| e.to_string())?;
    let s = dstar(&g, &tau, &sigma, &mut budget()).map_err(|e| e.to_string())?;
    check(h == 2 && s == 2, format!("d_hamm_s = {h}, dstar = {s}"))?;
    Ok(
        "E explanation but not minimal, E' minimal, distances 2 and 2, min winning distance 1"
            .into(),
    )
}

fn game_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(6);
    let (mut positive, mut explanations) = (0, 0);
    for i in 0..500 {
        let g = game(&mut r, 7, i % 2 == 1);
        let (sigma, cause) = sample_game_query(&mut r, &g);
        let q = GameCauseQuery::new(&g, sigma.clone(), cause.clone(), GameMetric::PrefH);
        let fast = check_cause_game(&q, &mut budget()).map_err(|e| e.to_string())?;
        let slow = brute_force_check_cause(&q, &mut budget()).map_err(|e| e.to_string())?;
        check(
            fast.is_cause == slow.is_cause && fast.min_distance == slow.min_distance,
            format!("pref-h disagrees on {g:?} {sigma:?} {cause:?}"),
        )?;
        positive += usize::from(fast.is_cause);
        let owned: Vec<usize> = g
            .owned_by(sigma.player())
            .into_iter()
            .filter(|&v| g.successors(v).len() > 1)
            .collect();
        let e: BTreeSet<usize> = owned.into_iter().filter(|_| r.gen_bool(0.5)).collect();
        let fast = is_explanation(&g, &sigma, &e).map_err(|e| e.to_string())?;
        let slow =
            brute_force_is_explanation(&g, &sigma, &e, &mut budget()).map_err(|e| e.to_string())?;
        check(
            fast.is_some() == slow.is_some(),
            format!("explanation disagrees on {g:?} {sigma:?} {e:?}"),
        )?;
        explanations += usize::from(fast.is_some());
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!(
        "500 games agree ({positive} pref-h causes, {explanations} explanations), {:.1?}",
        start.elapsed()
    ))
}

fn dstar_exact() -> Outcome {
    let start = Instant::now();
    let mut r = rng(7);
    let mut pairs = 0;
    for i in 0..300 {
        let g = game(&mut r, 7, i % 2 == 1);
        for player in [Player::Reach, Player::Safe] {
            let all: Vec<Strategy> = Strategy::enumerate(&g, player).take(12).collect();
            for sigma in &all {
                for tau in &all {
                    let star = dstar(&g, tau, sigma, &mut budget()).map_err(|e| e.to_string())?;
                    let strat = dstrat(&g, tau, sigma, &mut budget()).map_err(|e| e.to_string())?;
                    check(
                        star == dstar_by_visit_orders(&g, tau, sigma),
                        format!("dstar on {g:?} {tau:?} {sigma:?}"),
                    )?;
                    check(
                        strat == dstrat_by_visit_orders(&g, tau, sigma),
                        format!("dstrat on {g:?} {tau:?} {sigma:?}"),
                    )?;
                    pairs += 1;
                }
            }
        }
    }
    let mut certified = 0;
    let mut acyclic = 0;
    while acyclic < 200 {
        let cyclic = r.gen_bool(0.3);
        let g = game(&mut r, 8, cyclic);
        let choices = (0..g.len())
            .map(|v| {
                g.is_owned_by(v, Player::Reach)
                    .then(|| g.successors(v)[r.gen_range(0..g.successors(v).len())])
            })
            .collect();
        let sigma = Strategy::new(&g, Player::Reach, choices).unwrap();
        match min_dstar_winning_strategy_acyclic(&g, &sigma, &mut budget()) {
            Ok(best) => {
                let slow =
                    brute_force_min_winning_distance(&g, &sigma, GameMetric::DStar, &mut budget())
                        .map_err(|e| e.to_string())?;
                check(
                    slow.map(|d| d.value() as usize) == Some(best.distance)
                        && is_winning_by_plays(&g, &best.strategy),
                    format!("min dstar on {g:?} {sigma:?}"),
                )?;
                certified += usize::from(best.certified);
                acyclic += 1;
            }
            Err(Error::NotAcyclic(_) | Error::NoWinningStrategy) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!(
        "{pairs} strategy pairs on 300 games, 200 acyclic minimizations ({certified} certified by the fast path), {:.1?}",
        start.elapsed()
    ))
}

fn bridge_all(sem: &Sem, effect: &BTreeSet<Valuation>) -> Result<usize, String> {
    let causes = but_for_causes(sem, effect).map_err(|e| e.to_string())?;
    for x in &causes {
        let v = bridge_check(sem, effect, x).map_err(|e| e.to_string())?;
        check(
            v.is_cause,
            format!("C_X fails for {sem:?} {effect:?} {x:?}"),
        )?;
    }
    Ok(causes.len())
}

fn sem_bridge() -> Outcome {
    let start = Instant::now();
    let (mut models, mut causes) = (0, 0);
    for n in 1..=3 {
        for sem in all_boolean_sems(n) {
            for effect in effects_containing(&evaluate_default(&sem)) {
                causes += bridge_all(&sem, &effect)?;
                models += 1;
            }
        }
    }
    let mut r = rng(8);
    for _ in 0..200 {
        let (sem, spec) = boolean_sem(&mut r, 4);
        causes += bridge_all(&sem, &spec.expand(&sem).map_err(|e| e.to_string())?)?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{models} (model, effect) pairs with n <= 3 and 200 with n = 4, {causes} but-for causes, {:.1?}",
        start.elapsed()
    ))
}

fn metric_axioms() -> Outcome {
    let mut r = rng(9);
    let word = |r: &mut rand_chacha::ChaCha8Rng, n: usize| -> Vec<u8> {
        (0..n).map(|_| r.gen_range(0..3)).collect()
    };
    let mut inputs = 0;
    while inputs < 10_000 {
        let (a, b) = (r.gen_range(0..9), r.gen_range(0..9));
        let u = word(&mut r, a);
        let m = if r.gen_bool(0.5) { a } else { b };
        let v = word(&mut r, m);
        check(
            d_pref_ap(&u, &u) == Distance::ZERO && d_pref_ap(&u, &v) == d_pref_ap(&v, &u),
            "pref-ap",
        )?;
        check(
            d_ghamm(&u, &u) == 0 && d_ghamm(&u, &v) == d_ghamm(&v, &u),
            "ghamm",
        )?;
        check(
            d_lev(&u, &u).0 == 0 && d_lev(&u, &v).0 == d_lev(&v, &u).0,
            "lev",
        )?;
        if u.len() == v.len() {
            check(
                hamming(&u, &u) == Ok(0) && hamming(&u, &v) == hamming(&v, &u),
                "hamm",
            )?;
        }
        inputs += 1;
    }
    let mut games = 0;
    while games < 500 {
        let cyclic = r.gen_bool(0.5);
        let g = game(&mut r, 7, cyclic);
        let player = if r.gen_bool(0.5) {
            Player::Reach
        } else {
            Player::Safe
        };
        let all: Vec<Strategy> = Strategy::enumerate(&g, player).take(40).collect();
        let (s, t) = (
            &all[r.gen_range(0..all.len())],
            &all[r.gen_range(0..all.len())],
        );
        let ph = |a, b| d_pref_hausdorff(&g, a, b).unwrap();
        check(ph(s, s) == Distance::ZERO && ph(s, t) == ph(t, s), "pref-h")?;
        check(
            d_hamm_s(s, s) == Ok(0) && d_hamm_s(s, t) == d_hamm_s(t, s),
            "hamm-s",
        )?;
        let st = |a, b| dstar(&g, a, b, &mut budget()).unwrap();
        check(st(s, s) == 0 && st(s, t) == st(t, s), "dstar")?;
        games += 1;
    }
    let mut triples = 0;
    while triples < 1000 {
        let n = r.gen_range(0..9);
        let (u, v, w) = (word(&mut r, n), word(&mut r, n), word(&mut r, n));
        let h = |a: &[u8], b: &[u8]| hamming(a, b).unwrap();
        check(h(&u, &w) <= h(&u, &v) + h(&v, &w), "hamm triangle")?;
        let (a, b, c) = (r.gen_range(0..9), r.gen_range(0..9), r.gen_range(0..9));
        let (u, v, w) = (word(&mut r, a), word(&mut r, b), word(&mut r, c));
        check(
            d_lev(&u, &w).0 <= d_lev(&u, &v).0 + d_lev(&v, &w).0,
            "lev triangle",
        )?;
        triples += 1;
    }
    Ok(format!("{inputs} word inputs and {games} strategy pairs, {triples} triangle triples, no violations"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let f = |n: &str| fixture(n).to_str().unwrap().to_string();
    let sem = dir.path().join("sem.json").to_str().unwrap().to_string();
    let game_file = dir.path().join("game.json").to_str().unwrap().to_string();
    let setup = [
        vec![
            "--seed",
            "5",
            "gen",
            "--family",
            "boolean-sem",
            "--size",
            "3",
            "--out",
            &sem,
        ],
        vec![
            "--seed",
            "5",
            "gen",
            "--family",
            "cyclic-game",
            "--size",
            "7",
            "--out",
            &game_file,
        ],
    ];
    for args in &setup {
        causekit(args);
    }
    let (fig1, fig1p) = (f("fig1.json"), f("fig1_path.json"));
    let (left, left_sigma) = (f("fig2_left.json"), f("fig2_left_sigma.json"));
    let (mid, mid_sigma) = (f("fig2_middle.json"), f("fig2_middle_sigma.json"));
    let runs: Vec<Vec<&str>> = vec![
        vec![
            "ts-cause",
            "--model",
            &fig1,
            "--path",
            &fig1p,
            "--cause",
            "cause",
            "--effect",
            "effect,s011",
            "--metric",
            "lev",
            "--witnesses",
            "3",
        ],
        vec![
            "oracle", "ts-cause", "--model", &fig1, "--path", &fig1p, "--cause", "cause",
            "--effect", "effect", "--metric", "pref-ap",
        ],
        vec![
            "game-cause",
            "--model",
            &left,
            "--player",
            "reach",
            "--strategy",
            &left_sigma,
            "--cause",
            "v2,v3",
            "--metric",
            "dstar",
        ],
        vec![
            "oracle",
            "game-cause",
            "--model",
            &left,
            "--player",
            "reach",
            "--strategy",
            &left_sigma,
            "--cause",
            "v3",
            "--metric",
            "pref-h",
        ],
        vec!["explain", "--model", &mid, "--strategy", &mid_sigma],
        vec![
            "explain",
            "--model",
            &mid,
            "--strategy",
            &mid_sigma,
            "--check-minimal",
            "v1",
            "--metric",
            "dstar",
        ],
        vec![
            "explain",
            "--model",
            &mid,
            "--strategy",
            &mid_sigma,
            "--min-distance",
            "--metric",
            "hamm-s",
        ],
        vec![
            "explain",
            "--model",
            &mid,
            "--strategy",
            &mid_sigma,
            "--min-dstar-acyclic",
        ],
        vec!["solve", "--model", &left],
        vec!["solve", "--model", &game_file],
        vec![
            "distance", "words", "--metric", "lev", "--left", "abbc", "--right", "accbc",
        ],
        vec![
            "distance",
            "strategies",
            "--model",
            &mid,
            "--metric",
            "dstar",
            "--left",
            &mid_sigma,
            "--right",
            &mid_sigma,
        ],
        vec!["sem", "butfor", "--sem", &sem],
        vec!["sem", "bridge", "--sem", &sem],
        vec![
            "--seed",
            "11",
            "gen",
            "--family",
            "acyclic-game",
            "--size",
            "7",
        ],
        vec![
            "--seed",
            "11",
            "gen",
            "--family",
            "layered-ts",
            "--size",
            "4",
        ],
    ];
    for args in &runs {
        let first = causekit(args);
        let second = causekit(args);
        check(first == second, format!("outputs differ for {args:?}"))?;
        check(
            first.0 == 0 || first.0 == 1,
            format!("exit {} for {args:?}", first.0),
        )?;
    }
    Ok(format!(
        "{} invocations byte-identical across two runs",
        runs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Fig. 1 regression through the binary", fig1_cli),
        ("Levenshtein regression", levenshtein),
        ("TS checker agrees with the oracle", ts_oracle),
        ("Fig. 2 (left) game regressions", fig2_left),
        ("Fig. 2 (middle) explanation regressions", fig2_middle),
        ("game checker agrees with strategy enumeration", game_oracle),
        ("d* exactness", dstar_exact),
        ("SEM bridge", sem_bridge),
        ("metric axioms", metric_axioms),
        ("CLI determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(reason) => {
                println!("criterion {}: FAIL  {name}: {reason}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
