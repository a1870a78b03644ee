use std::path::PathBuf;
use std::process::{Command, Output};

use causekit::generate::{generate, Family, GeneratorSpec, Instance};
use causekit::io::{model_to_json, parse_model, parse_sem, sem_to_json};
use causekit::model::validate_layered;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causekit"))
        .args(args)
        .output()
        .unwrap()
}

fn doc(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn fig2_left_game_cause_exit_codes() {
    let (m, s) = (fixture("fig2_left.json"), fixture("fig2_left_sigma.json"));
    let base = [
        "game-cause",
        "--model",
        &m,
        "--player",
        "reach",
        "--strategy",
        &s,
    ];
    let yes = run(&[&base[..], &["--cause", "v3", "--metric", "hamm-s"]].concat());
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(doc(&yes)["minDistance"], 1);
    let no = run(&[&base[..], &["--cause", "v3", "--metric", "pref-h"]].concat());
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(doc(&no)["minDistance"], 0.25);
    assert_eq!(doc(&no)["verdict"], false);
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"kind\": \"game\", \"initial\": ").unwrap();
    let out = run(&["solve", "--model", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let missing = run(&[
        "solve",
        "--model",
        dir.path().join("nope.json").to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(2));

    let (m, s) = (
        fixture("fig2_middle.json"),
        fixture("fig2_middle_sigma.json"),
    );
    let tight = run(&[
        "--budget",
        "1",
        "explain",
        "--model",
        &m,
        "--strategy",
        &s,
        "--min-distance",
        "--metric",
        "dstar",
    ]);
    assert_eq!(tight.status.code(), Some(3));

    let unknown = run(&[
        "distance", "words", "--metric", "hamm", "--left", "ab", "--right", "abc",
    ]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn pretty_summary_goes_to_stderr() {
    let out = run(&["--pretty", "solve", "--model", &fixture("fig2_left.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(doc(&out)["winner"], "reach");
    let text = String::from_utf8(out.stderr).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("winner") && l.ends_with("reach")));
}

#[test]
fn explain_modes() {
    let (m, s) = (
        fixture("fig2_middle.json"),
        fixture("fig2_middle_sigma.json"),
    );
    let base = ["explain", "--model", m.as_str(), "--strategy", s.as_str()];
    let check = run(&[&base[..], &["--check", "v1,v2"]].concat());
    assert_eq!(check.status.code(), Some(0));
    let minimal = run(&[
        &base[..],
        &["--check-minimal", "v1,v2", "--metric", "hamm-s"],
    ]
    .concat());
    assert_eq!(minimal.status.code(), Some(1));
    let best = run(&[&base[..], &["--min-dstar-acyclic"]].concat());
    assert_eq!(doc(&best)["minDistance"], 1);
    let clash = run(&[&base[..], &["--check", "v1", "--min-distance"]].concat());
    assert_eq!(clash.status.code(), Some(2));
}

#[test]
fn generated_instances_validate_and_round_trip() {
    for family in [
        "layered-ts",
        "acyclic-ts",
        "acyclic-game",
        "cyclic-game",
        "boolean-sem",
    ] {
        let args = ["--seed", "1", "gen", "--family", family, "--size", "7"];
        let first = run(&args);
        assert_eq!(first.status.code(), Some(0), "{family}");
        assert_eq!(first.stdout, run(&args).stdout, "{family}");
        let text = String::from_utf8(first.stdout).unwrap();
        let spec = GeneratorSpec::new(family.parse::<Family>().unwrap(), 7, 1);
        match generate(&spec).unwrap() {
            Instance::Sem(sem, effect) => {
                let (back, e) = parse_sem(&text).unwrap();
                assert_eq!(sem_to_json(&back, &e), sem_to_json(&sem, &effect));
            }
            Instance::Ts(ts) => {
                let back = parse_model(&text).unwrap().into_ts().unwrap();
                assert_eq!(model_to_json(&back.clone().into()), text);
                assert_eq!(model_to_json(&ts.into()), text);
                if family == "layered-ts" {
                    validate_layered(&back).unwrap();
                }
            }
            Instance::Game(g) => {
                let back = parse_model(&text).unwrap().into_game().unwrap();
                assert_eq!(model_to_json(&back.into()), text);
                assert_eq!(model_to_json(&g.into()), text);
            }
        }
    }
}
