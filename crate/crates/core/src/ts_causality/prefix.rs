use std::collections::BTreeMap;

use super::{join, maximal_path_in, path_to_target, CauseQuery, CauseVerdict, Phi, Witness};
use crate::distances::Distance;
use crate::error::Result;
use crate::model::{mask, maximal_avoiding_region, reach_avoiding_region, StateId};

/// Cause check for the prefix distance on traces.
///
/// `T_j` collects the states reachable by a `C`-avoiding path whose trace is
/// `L(s_0) … L(s_j)` and from which a `C`-avoiding maximal path continues.
/// With `i` the last index where `T_i` is non-empty, the closest avoiders
/// are the maximal continuations of the paths into `T_i`, at distance
/// `2^-(i+1)`, except when `T_i` is the last layer and contains terminal
/// states: those paths share the whole trace and have distance `0`.
pub fn check_cause_pref_ap(q: &CauseQuery) -> Result<CauseVerdict> {
    q.validate()?;
    let ts = q.ts;
    let n = ts.len();
    let pi = &q.path;
    let avoid_c = mask(n, &q.cause);
    let region = maximal_avoiding_region(ts, &avoid_c);
    if !region[ts.initial()] {
        return Ok(CauseVerdict::unavoidable());
    }

    // layers[j] maps each state of T_j to its predecessor in T_{j-1}
    let mut layers: Vec<BTreeMap<StateId, StateId>> =
        vec![BTreeMap::from([(ts.initial(), ts.initial())])];
    for &sj in &pi[1..] {
        let want = ts.label(sj);
        let mut next = BTreeMap::new();
        for &s in layers.last().unwrap().keys() {
            for &t in ts.successors(s) {
                if region[t] && ts.label(t) == want {
                    next.entry(t).or_insert(s);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push(next);
    }
    let i = layers.len() - 1;
    let prefix_to = |t: StateId| {
        let mut path = vec![t];
        let mut cur = t;
        for j in (1..=i).rev() {
            cur = layers[j][&cur];
            path.push(cur);
        }
        path.reverse();
        path
    };

    let last: Vec<StateId> = layers[i].keys().copied().collect();
    let full_terminals: Vec<StateId> = if i + 1 == pi.len() {
        last.iter()
            .copied()
            .filter(|&t| ts.is_terminal(t))
            .collect()
    } else {
        Vec::new()
    };
    if !full_terminals.is_empty() {
        let witnesses = full_terminals
            .into_iter()
            .map(|t| {
                let path = super::PathWitness::finite(prefix_to(t));
                let satisfies_phi = q.phi.satisfied_by(&path, &q.effect);
                Witness {
                    path,
                    distance: Distance::ZERO,
                    satisfies_phi,
                }
            })
            .collect();
        return Ok(CauseVerdict::decide(Distance::ZERO, witnesses, q.witnesses));
    }

    let effect = mask(n, &q.effect);
    let avoid_ce: Vec<bool> = (0..n).map(|s| avoid_c[s] || effect[s]).collect();
    let reach_e = reach_avoiding_region(ts, &effect, &avoid_c);
    let dodge_e = maximal_avoiding_region(ts, &avoid_ce);
    let to_effect = |t: StateId| {
        let p = path_to_target(ts, t, &effect, &avoid_c).expect("state can reach the effect");
        super::PathWitness::finite(p)
    };
    let min = Distance::pow2_neg(i + 1);
    let mut witnesses = Vec::new();
    for t in last {
        let prefix = prefix_to(t);
        let mut conts = Vec::new();
        if reach_e[t] {
            conts.push((to_effect(t), q.phi == Phi::Reach));
        }
        if dodge_e[t] {
            conts.push((maximal_path_in(ts, t, &dodge_e), q.phi == Phi::Safe));
        }
        for (cont, satisfies_phi) in conts {
            witnesses.push(Witness {
                path: join(&prefix, cont),
                distance: min,
                satisfies_phi,
            });
        }
    }
    Ok(CauseVerdict::decide(min, witnesses, q.witnesses))
}
