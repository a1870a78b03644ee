use super::{CauseQuery, CauseVerdict, PathWitness, TsMetric, Witness};
use crate::distances::{
    d_ghamm, d_hamm, d_hamm_weighted, d_lev, d_pref, d_pref_ap, Budget, Distance,
};
use crate::error::{Error, Result};
use crate::model::{StateId, StateSet, TransitionSystem};

/// All maximal finite paths from the initial state that avoid `avoid`.
///
/// Acyclic systems are enumerated completely. A cyclic system needs
/// `bound`: paths are cut at `bound` states and cut paths are dropped, so
/// infinite paths and longer finite paths are never seen.
pub fn maximal_paths(
    ts: &TransitionSystem,
    avoid: &StateSet,
    bound: Option<usize>,
    budget: &mut Budget,
) -> Result<Vec<Vec<StateId>>> {
    if bound.is_none() && !ts.is_acyclic() {
        return Err(Error::PreconditionViolated(
            "enumerating a cyclic system needs a length bound".into(),
        ));
    }
    let limit = bound.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    if avoid.contains(&ts.initial()) {
        return Ok(out);
    }
    let mut path = vec![ts.initial()];
    let mut stack: Vec<usize> = vec![0];
    while let Some(&k) = stack.last() {
        let s = *path.last().unwrap();
        if k == 0 {
            budget.tick()?;
            if ts.is_terminal(s) {
                out.push(path.clone());
            }
        }
        let succ = ts.successors(s);
        let next = if path.len() < limit {
            succ[k..].iter().position(|t| !avoid.contains(t))
        } else {
            None
        };
        match next {
            Some(off) => {
                *stack.last_mut().unwrap() = k + off + 1;
                path.push(succ[k + off]);
                stack.push(0);
            }
            None => {
                stack.pop();
                path.pop();
            }
        }
    }
    Ok(out)
}

fn distance(q: &CauseQuery, rho: &[StateId]) -> Result<Distance> {
    let ts = q.ts;
    let (u, v) = (ts.trace(&q.path), ts.trace(rho));
    Ok(match &q.metric {
        TsMetric::Pref => d_pref(&q.path, rho),
        TsMetric::PrefAp => d_pref_ap(&u, &v),
        TsMetric::Hamm => d_hamm(&u, &v)?,
        TsMetric::WeightedHamm(m) => d_hamm_weighted(&u, &v, |a, b| m.get(*a, *b))?,
        TsMetric::GHamm => Distance::from_count(d_ghamm(&u, &v)),
        TsMetric::Lev => Distance::from_count(d_lev(&u, &v).0),
    })
}

/// Definitional cause check: enumerates every `C`-avoiding maximal path,
/// measures it against `π` and applies the two conditions literally.
///
/// For cyclic systems only paths shorter than `bound` are considered, which
/// makes the verdict unsound whenever infinite or long paths matter.
pub fn brute_force_check(
    q: &CauseQuery,
    bound: Option<usize>,
    budget: &mut Budget,
) -> Result<CauseVerdict> {
    q.validate()?;
    let paths = maximal_paths(q.ts, &q.cause, bound, budget)?;
    let mut all = Vec::with_capacity(paths.len());
    for rho in paths {
        let d = distance(q, &rho)?;
        let path = PathWitness::finite(rho);
        let satisfies_phi = q.phi.satisfied_by(&path, &q.effect);
        all.push(Witness {
            path,
            distance: d,
            satisfies_phi,
        });
    }
    let Some(min) = all.iter().map(|w| w.distance).min() else {
        return Ok(CauseVerdict::unavoidable());
    };
    let closest = all.into_iter().filter(|w| w.distance == min).collect();
    Ok(CauseVerdict::decide(min, closest, q.witnesses))
}
