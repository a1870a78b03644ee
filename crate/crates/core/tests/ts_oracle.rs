use causekit::distances::{Budget, DEFAULT_BUDGET};
use causekit::generate::{
    acyclic_ts, all_layered_ts, layered_ts, rng, sample_ts_query, TsQueryParts,
};
use causekit::model::{validate_maximal_path, TransitionSystem};
use causekit::ts_causality::{brute_force_check, check_cause, CauseQuery, TsMetric};
use rand::Rng;

/// Returns whether the query was valid and decided by both.
fn agree(ts: &TransitionSystem, parts: &TsQueryParts, metric: TsMetric) -> bool {
    let q = CauseQuery::new(
        ts,
        parts.path.clone(),
        parts.cause.clone(),
        parts.effect.clone(),
        parts.phi,
        metric,
    )
    .with_witnesses(3);
    let fast = check_cause(&q);
    let slow = brute_force_check(&q, None, &mut Budget::new(DEFAULT_BUDGET));
    match (fast, slow) {
        (Ok(f), Ok(s)) => {
            assert_eq!(
                f.is_cause,
                s.is_cause,
                "{} on {ts:?} {parts:?}",
                q.metric.name()
            );
            assert_eq!(
                f.min_distance,
                s.min_distance,
                "{} on {ts:?} {parts:?}",
                q.metric.name()
            );
            for w in &f.witnesses {
                w.path.validate(ts, &parts.cause).unwrap();
                assert_eq!(Some(w.distance), f.min_distance);
            }
            true
        }
        (Err(a), Err(b)) => {
            assert_eq!(a, b);
            false
        }
        (f, s) => panic!(
            "{} disagrees on {ts:?} {parts:?}: {f:?} vs {s:?}",
            q.metric.name()
        ),
    }
}

#[test]
fn random_acyclic_systems_match_the_oracle() {
    let mut r = rng(11);
    let (mut checked, mut decided) = (0, 0);
    while checked < 300 {
        let k = r.gen_range(1..=3);
        let ts = acyclic_ts(&mut r, 9, k);
        let Some(parts) = sample_ts_query(&mut r, &ts) else {
            continue;
        };
        for m in [
            TsMetric::Pref,
            TsMetric::PrefAp,
            TsMetric::GHamm,
            TsMetric::Lev,
        ] {
            decided += usize::from(agree(&ts, &parts, m));
        }
        checked += 1;
    }
    assert_eq!(decided, 4 * checked);
}

#[test]
fn random_layered_systems_match_the_oracle() {
    let mut r = rng(12);
    for _ in 0..300 {
        let layers = r.gen_range(2..=5);
        let ts = layered_ts(&mut r, layers, 3, 2);
        let Some(parts) = sample_ts_query(&mut r, &ts) else {
            continue;
        };
        for m in [
            TsMetric::Hamm,
            TsMetric::GHamm,
            TsMetric::PrefAp,
            TsMetric::Lev,
        ] {
            agree(&ts, &parts, m);
        }
    }
}

#[test]
fn small_layered_systems_exhaustively() {
    let mut r = rng(13);
    for ts in all_layered_ts(3, 2, 2) {
        for _ in 0..3 {
            if let Some(parts) = sample_ts_query(&mut r, &ts) {
                agree(&ts, &parts, TsMetric::Hamm);
            }
        }
    }
}

#[test]
fn query_preconditions() {
    let ts = acyclic_ts(&mut rng(1), 6, 2);
    let path: Vec<usize> = {
        let mut p = vec![ts.initial()];
        while let Some(&n) = ts.successors(*p.last().unwrap()).first() {
            p.push(n);
        }
        p
    };
    validate_maximal_path(&ts, &path).unwrap();
    let q = CauseQuery::new(
        &ts,
        path,
        Default::default(),
        Default::default(),
        causekit::ts_causality::Phi::Safe,
        TsMetric::Lev,
    );
    assert!(check_cause(&q).is_err());
}
