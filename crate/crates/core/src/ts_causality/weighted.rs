use std::ops::Add;

use super::{maximal_path_in, CauseQuery, CauseVerdict, PathWitness, Phi, TsMetric, Witness};
use crate::distances::Distance;
use crate::error::{Error, Result};
use crate::model::{
    mask, maximal_avoiding_region, validate_layered, StateId, StateSet, TransitionSystem,
};
use crate::shortest_path::{EdgeKind, WeightedGraph};

/// A weighted graph over (state, position) pairs together with the state
/// of every node and the accepting nodes, whose routes correspond to
/// `C`-avoiding maximal finite paths.
#[derive(Debug, Clone)]
pub struct ProductGraph<W> {
    pub graph: WeightedGraph<W>,
    pub state_of: Vec<StateId>,
    pub accepting: Vec<usize>,
}

impl<W: Copy + Ord + Add<Output = W> + Default> ProductGraph<W> {
    /// The system path of a route: start state plus the targets of `Step`
    /// edges.
    pub fn project(&self, start: usize, steps: &[(EdgeKind, usize)]) -> Vec<StateId> {
        let mut states = vec![self.state_of[start]];
        states.extend(
            steps
                .iter()
                .filter(|(k, _)| *k == EdgeKind::Step)
                .map(|&(_, v)| self.state_of[v]),
        );
        states
    }
}

/// Hamming graph of a layered system: entering state `t` at depth `d` costs
/// `cost(t, d)`. States in `cause` are removed.
pub fn build_hamm_graph<W, F>(
    ts: &TransitionSystem,
    cause: &StateSet,
    cost: F,
) -> Result<ProductGraph<W>>
where
    W: Copy + Ord + Add<Output = W> + Default,
    F: Fn(StateId, usize) -> W,
{
    let (depth, _) = validate_layered(ts)?;
    let mut graph = WeightedGraph::new(ts.len(), ts.initial());
    for (s, t) in ts.edges() {
        if cause.contains(&s) || cause.contains(&t) {
            continue;
        }
        if let Some(d) = depth[t] {
            graph.add_edge(s, t, cost(t, d), EdgeKind::Step);
        }
    }
    let accepting = ts
        .terminals()
        .filter(|t| !cause.contains(t) && depth[*t].is_some())
        .collect();
    Ok(ProductGraph {
        graph,
        state_of: (0..ts.len()).collect(),
        accepting,
    })
}

/// Copies `0..n` of the state space for `n = |π|`. Within the first `n - 1`
/// copies transitions advance the copy and cost 1 on a label mismatch with
/// `π`; a terminal state in copy `i` jumps to the last copy at cost
/// `n - 1 - i`; transitions inside the last copy cost 1.
pub fn build_ghamm_product(
    ts: &TransitionSystem,
    pi: &[StateId],
    cause: &StateSet,
) -> ProductGraph<usize> {
    let n = pi.len();
    let node = |s: StateId, i: usize| s * n + i;
    let mut graph = WeightedGraph::new(ts.len() * n, node(ts.initial(), 0));
    for s in (0..ts.len()).filter(|s| !cause.contains(s)) {
        for i in 0..n {
            let from = node(s, i);
            for &t in ts.successors(s).iter().filter(|t| !cause.contains(t)) {
                if i + 1 < n {
                    let w = usize::from(ts.label(t) != ts.label(pi[i + 1]));
                    graph.add_edge(from, node(t, i + 1), w, EdgeKind::Step);
                } else {
                    graph.add_edge(from, node(t, i), 1, EdgeKind::Step);
                }
            }
            if ts.is_terminal(s) && i + 1 < n {
                graph.add_edge(from, node(s, n - 1), n - 1 - i, EdgeKind::Stay);
            }
        }
    }
    let accepting = (0..ts.len())
        .filter(|&t| ts.is_terminal(t) && !cause.contains(&t))
        .map(|t| node(t, n - 1))
        .collect();
    let state_of = (0..ts.len() * n).map(|v| v / n).collect();
    ProductGraph {
        graph,
        state_of,
        accepting,
    }
}

/// Levenshtein product: node `(s, i)` means the first `i + 1` letters of
/// `L(π)` are consumed and the compared path is at `s`. Edges are matches
/// or substitutions `(s,i) → (t,i+1)`, insertions `(s,i) → (t,i)` and
/// deletions `(s,i) → (s,i+1)`; matches cost 0, everything else 1.
pub fn build_lev_product(
    ts: &TransitionSystem,
    pi: &[StateId],
    cause: &StateSet,
) -> ProductGraph<usize> {
    let n = pi.len();
    let node = |s: StateId, i: usize| s * n + i;
    let mut graph = WeightedGraph::new(ts.len() * n, node(ts.initial(), 0));
    for s in (0..ts.len()).filter(|s| !cause.contains(s)) {
        for i in 0..n {
            let from = node(s, i);
            for &t in ts.successors(s).iter().filter(|t| !cause.contains(t)) {
                if i + 1 < n {
                    let w = usize::from(ts.label(t) != ts.label(pi[i + 1]));
                    graph.add_edge(from, node(t, i + 1), w, EdgeKind::Step);
                }
                graph.add_edge(from, node(t, i), 1, EdgeKind::Step);
            }
            if i + 1 < n {
                graph.add_edge(from, node(s, i + 1), 1, EdgeKind::Stay);
            }
        }
    }
    let accepting = (0..ts.len())
        .filter(|&t| ts.is_terminal(t) && !cause.contains(&t))
        .map(|t| node(t, n - 1))
        .collect();
    let state_of = (0..ts.len() * n).map(|v| v / n).collect();
    ProductGraph {
        graph,
        state_of,
        accepting,
    }
}

/// Compares the cheapest routes to `Φ`-satisfying and `Φ`-violating
/// accepting nodes. `infinite` says whether infinite `C`-avoiding paths are
/// comparison candidates at distance `∞`.
fn compare_routes<W, F>(
    q: &CauseQuery,
    prod: &ProductGraph<W>,
    to_distance: F,
    infinite: bool,
) -> CauseVerdict
where
    W: Copy + Ord + Add<Output = W> + Default,
    F: Fn(W) -> Distance,
{
    let ts = q.ts;
    let sp = prod.graph.shortest_paths();
    let mut best: Vec<Option<(W, usize)>> = vec![None; ts.len()];
    for &v in &prod.accepting {
        if let Some(d) = sp.distance(v) {
            let t = prod.state_of[v];
            if best[t].is_none_or(|(b, _)| d < b) {
                best[t] = Some((d, v));
            }
        }
    }
    let candidates: Vec<Witness> = best
        .iter()
        .flatten()
        .map(|&(d, v)| {
            let (start, steps) = sp.route(v).expect("settled node");
            let path = PathWitness::finite(prod.project(start, &steps));
            let satisfies_phi = q.phi.satisfied_by(&path, &q.effect);
            Witness {
                path,
                distance: to_distance(d),
                satisfies_phi,
            }
        })
        .collect();
    match candidates.iter().map(|w| w.distance).min() {
        Some(min) => {
            let closest = candidates
                .into_iter()
                .filter(|w| w.distance == min)
                .collect();
            CauseVerdict::decide(min, closest, q.witnesses)
        }
        None if infinite => {
            let region = maximal_avoiding_region(ts, &mask(ts.len(), &q.cause));
            if !region[ts.initial()] {
                return CauseVerdict::unavoidable();
            }
            let path = maximal_path_in(ts, ts.initial(), &region);
            let satisfies_phi = q.phi == Phi::Safe;
            let w = Witness {
                path,
                distance: Distance::INFINITY,
                satisfies_phi,
            };
            CauseVerdict::decide(Distance::INFINITY, vec![w], q.witnesses)
        }
        None => CauseVerdict::unavoidable(),
    }
}

/// Cause check for the Hamming distance (or its label-weighted variant) on
/// a layered system.
pub fn check_cause_hamm_layered(q: &CauseQuery) -> Result<CauseVerdict> {
    q.validate()?;
    let ts = q.ts;
    if q.cause.contains(&ts.initial()) {
        validate_layered(ts)?;
        return Ok(CauseVerdict::unavoidable());
    }
    let pi = &q.path;
    match &q.metric {
        TsMetric::Hamm => {
            let prod = build_hamm_graph(ts, &q.cause, |t, d| {
                usize::from(ts.label(t) != ts.label(pi[d]))
            })?;
            Ok(compare_routes(q, &prod, Distance::from_count, false))
        }
        TsMetric::WeightedHamm(metric) => {
            let prod = build_hamm_graph(ts, &q.cause, |t, d| {
                Distance::new(metric.get(ts.label(t), ts.label(pi[d])))
            })?;
            Ok(compare_routes(q, &prod, |d| d, false))
        }
        other => Err(Error::PreconditionViolated(format!(
            "metric `{}` is not a Hamming metric",
            other.name()
        ))),
    }
}

/// Cause check for the generalized Hamming distance.
pub fn check_cause_ghamm(q: &CauseQuery) -> Result<CauseVerdict> {
    q.validate()?;
    if q.cause.contains(&q.ts.initial()) {
        return Ok(CauseVerdict::unavoidable());
    }
    let prod = build_ghamm_product(q.ts, &q.path, &q.cause);
    Ok(compare_routes(q, &prod, Distance::from_count, true))
}

/// Cause check for the Levenshtein distance.
pub fn check_cause_lev(q: &CauseQuery) -> Result<CauseVerdict> {
    q.validate()?;
    if q.cause.contains(&q.ts.initial()) {
        return Ok(CauseVerdict::unavoidable());
    }
    let prod = build_lev_product(q.ts, &q.path, &q.cause);
    Ok(compare_routes(q, &prod, Distance::from_count, true))
}
