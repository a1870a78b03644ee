//! Counterfactual causes on executions of transition systems.
//!
//! Given a maximal finite path `π` that visits `C` and satisfies `Φ`, the
//! set `C` is a `d`-counterfactual cause for `Φ` on `π` if
//!
//! 1. some maximal path avoids `C`, and
//! 2. every `C`-avoiding maximal path at minimal `d`-distance to `π`
//!    violates `Φ`.
//!
//! `Φ` is either `◇E` or `□¬E` for a set `E` of terminal states.

mod oracle;
mod prefix;
mod weighted;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::distances::{Distance, LabelMetric};
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::model::{validate_maximal_path, StateId, StateSet, TransitionSystem};

pub use oracle::{brute_force_check, maximal_paths};
pub use prefix::check_cause_pref_ap;
pub use weighted::{
    build_ghamm_product, build_hamm_graph, build_lev_product, check_cause_ghamm,
    check_cause_hamm_layered, check_cause_lev, ProductGraph,
};

/// The effect property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phi {
    /// `◇E`
    Reach,
    /// `□¬E`
    Safe,
}

impl Phi {
    /// Whether a path satisfies the property. Infinite paths never reach a
    /// terminal effect state.
    pub fn satisfied_by(self, path: &PathWitness, effect: &StateSet) -> bool {
        let hits =
            path.loop_start.is_none() && path.states.last().is_some_and(|s| effect.contains(s));
        match self {
            Phi::Reach => hits,
            Phi::Safe => !hits,
        }
    }
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phi::Reach => "reach",
            Phi::Safe => "safe",
        })
    }
}

impl FromStr for Phi {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reach" => Ok(Phi::Reach),
            "safe" => Ok(Phi::Safe),
            _ => Err(Error::Parse(format!(
                "unknown property `{s}` (expected reach or safe)"
            ))),
        }
    }
}

/// Distance used to compare executions.
#[derive(Debug, Clone, PartialEq)]
pub enum TsMetric {
    /// Prefix distance on paths (prefix distance on traces with unique labels).
    Pref,
    /// Prefix distance on traces.
    PrefAp,
    /// Hamming distance on traces of a layered system.
    Hamm,
    /// Hamming distance with per-position label costs, layered systems only.
    WeightedHamm(LabelMetric),
    /// Generalized Hamming distance.
    GHamm,
    /// Levenshtein distance.
    Lev,
}

impl TsMetric {
    pub fn name(&self) -> &'static str {
        match self {
            TsMetric::Pref => "pref",
            TsMetric::PrefAp => "pref-ap",
            TsMetric::Hamm => "hamm",
            TsMetric::WeightedHamm(_) => "hamm-weighted",
            TsMetric::GHamm => "ghamm",
            TsMetric::Lev => "lev",
        }
    }
}

impl FromStr for TsMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pref" => Ok(TsMetric::Pref),
            "pref-ap" => Ok(TsMetric::PrefAp),
            "hamm" => Ok(TsMetric::Hamm),
            "ghamm" => Ok(TsMetric::GHamm),
            "lev" => Ok(TsMetric::Lev),
            _ => Err(Error::Parse(format!(
                "unknown metric `{s}` (expected pref, pref-ap, hamm, ghamm or lev)"
            ))),
        }
    }
}

/// A cause query on a transition system.
#[derive(Debug, Clone)]
pub struct CauseQuery<'a> {
    pub ts: &'a TransitionSystem,
    pub path: Vec<StateId>,
    pub cause: StateSet,
    pub effect: StateSet,
    pub phi: Phi,
    pub metric: TsMetric,
    /// Maximal number of witness paths reported.
    pub witnesses: usize,
    /// Permit `C ∩ E ≠ ∅`. Off by default.
    pub allow_overlap: bool,
}

impl<'a> CauseQuery<'a> {
    pub fn new(
        ts: &'a TransitionSystem,
        path: Vec<StateId>,
        cause: StateSet,
        effect: StateSet,
        phi: Phi,
        metric: TsMetric,
    ) -> Self {
        Self {
            ts,
            path,
            cause,
            effect,
            phi,
            metric,
            witnesses: 1,
            allow_overlap: false,
        }
    }

    pub fn with_witnesses(mut self, k: usize) -> Self {
        self.witnesses = k;
        self
    }

    pub fn with_metric(mut self, metric: TsMetric) -> Self {
        self.metric = metric;
        self
    }

    pub fn allowing_overlap(mut self) -> Self {
        self.allow_overlap = true;
        self
    }

    /// Checks the query invariants.
    pub fn validate(&self) -> Result<()> {
        let ts = self.ts;
        validate_maximal_path(ts, &self.path)?;
        if let Some(&s) = self
            .cause
            .iter()
            .chain(&self.effect)
            .find(|&&s| s >= ts.len())
        {
            return Err(Error::PreconditionViolated(format!(
                "state index {s} is out of range"
            )));
        }
        if let Some(&e) = self.effect.iter().find(|&&e| !ts.is_terminal(e)) {
            return Err(Error::PreconditionViolated(format!(
                "effect state `{}` is not terminal",
                ts.name(e)
            )));
        }
        if !self.allow_overlap {
            if let Some(&c) = self.cause.intersection(&self.effect).next() {
                return Err(Error::PreconditionViolated(format!(
                    "state `{}` is both in the cause and in the effect",
                    ts.name(c)
                )));
            }
        }
        if !self.path.iter().any(|s| self.cause.contains(s)) {
            return Err(Error::PreconditionViolated(
                "the path does not visit the cause".into(),
            ));
        }
        let pi = PathWitness::finite(self.path.clone());
        if !self.phi.satisfied_by(&pi, &self.effect) {
            return Err(Error::PreconditionViolated(format!(
                "the path does not satisfy the {} property",
                self.phi
            )));
        }
        if let TsMetric::WeightedHamm(m) = &self.metric {
            if m.size() != ts.alphabet().len() {
                return Err(Error::PreconditionViolated(
                    "label metric size differs from the alphabet size".into(),
                ));
            }
        }
        Ok(())
    }
}

/// A maximal path: finite, or a lasso whose states from `loop_start` on
/// repeat forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWitness {
    pub states: Vec<StateId>,
    pub loop_start: Option<usize>,
}

impl PathWitness {
    pub fn finite(states: Vec<StateId>) -> Self {
        Self {
            states,
            loop_start: None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.loop_start.is_none()
    }

    /// Checks that this is a maximal path of `ts` from the initial state that
    /// never visits `avoid`.
    pub fn validate(&self, ts: &TransitionSystem, avoid: &StateSet) -> Result<()> {
        if self.states.first() != Some(&ts.initial()) {
            return Err(Error::NotAPath(
                "witness does not start at the initial state".into(),
            ));
        }
        for w in self.states.windows(2) {
            if ts.successors(w[0]).binary_search(&w[1]).is_err() {
                return Err(Error::NotAPath(format!(
                    "no transition `{}` -> `{}`",
                    ts.name(w[0]),
                    ts.name(w[1])
                )));
            }
        }
        match self.loop_start {
            None if !ts.is_terminal(*self.states.last().unwrap()) => {
                return Err(Error::NotMaximal(
                    "finite witness does not end in a terminal state".into(),
                ))
            }
            Some(k)
                if k >= self.states.len()
                    || ts
                        .successors(*self.states.last().unwrap())
                        .binary_search(&self.states[k])
                        .is_err() =>
            {
                return Err(Error::NotAPath(
                    "witness loop is not closed by a transition".into(),
                ))
            }
            _ => {}
        }
        if let Some(s) = self.states.iter().find(|s| avoid.contains(s)) {
            return Err(Error::PreconditionViolated(format!(
                "witness visits `{}`",
                ts.name(*s)
            )));
        }
        Ok(())
    }
}

/// A `C`-avoiding maximal path with its distance to `π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub path: PathWitness,
    pub distance: Distance,
    pub satisfies_phi: bool,
}

/// Outcome of a cause check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CauseVerdict {
    pub is_cause: bool,
    /// Whether some maximal path avoids `C` (condition 1).
    pub avoidable: bool,
    /// Distance from `π` to the closest `C`-avoiding maximal paths.
    pub min_distance: Option<Distance>,
    /// Closest `C`-avoiding paths; `Φ`-satisfying ones come first.
    pub witnesses: Vec<Witness>,
}

impl CauseVerdict {
    pub(crate) fn unavoidable() -> Self {
        Self {
            is_cause: false,
            avoidable: false,
            min_distance: None,
            witnesses: Vec::new(),
        }
    }

    /// Builds the verdict from the minimal distance and candidate witnesses
    /// at that distance.
    pub(crate) fn decide(min: Distance, mut closest: Vec<Witness>, k: usize) -> Self {
        let is_cause = closest.iter().all(|w| !w.satisfies_phi);
        closest.sort_by(|a, b| {
            (a.distance, !a.satisfies_phi, &a.path).cmp(&(b.distance, !b.satisfies_phi, &b.path))
        });
        closest.dedup();
        closest.truncate(k);
        Self {
            is_cause,
            avoidable: true,
            min_distance: Some(min),
            witnesses: closest,
        }
    }
}

/// Decides whether `C` is a cause, dispatching on the metric.
pub fn check_cause(query: &CauseQuery) -> Result<CauseVerdict> {
    match query.metric {
        TsMetric::Pref => {
            query.validate()?;
            let unique = query.ts.with_unique_labels();
            let q = CauseQuery {
                ts: &unique,
                metric: TsMetric::PrefAp,
                ..query.clone()
            };
            check_cause_pref_ap(&q)
        }
        TsMetric::PrefAp => check_cause_pref_ap(query),
        TsMetric::Hamm | TsMetric::WeightedHamm(_) => check_cause_hamm_layered(query),
        TsMetric::GHamm => check_cause_ghamm(query),
        TsMetric::Lev => check_cause_lev(query),
    }
}

/// Checks a batch of independent queries.
pub fn check_batch(queries: &[CauseQuery], mode: ExecMode) -> Vec<Result<CauseVerdict>> {
    exec::map(mode, queries, check_cause)
}

/// Shortest path from `from` to a state in `target` that stays outside
/// `avoid`.
pub(crate) fn path_to_target(
    ts: &TransitionSystem,
    from: StateId,
    target: &[bool],
    avoid: &[bool],
) -> Option<Vec<StateId>> {
    if avoid[from] {
        return None;
    }
    let mut parent = vec![usize::MAX; ts.len()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        if target[s] {
            let mut path = vec![s];
            let mut cur = s;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &t in ts.successors(s) {
            if parent[t] == usize::MAX && !avoid[t] {
                parent[t] = s;
                queue.push_back(t);
            }
        }
    }
    None
}

/// A maximal path from `from` inside `region`, where `region` is closed in
/// the sense that every non-terminal member has a successor in it. Prefers
/// a shortest route to a terminal; otherwise returns a lasso.
pub(crate) fn maximal_path_in(
    ts: &TransitionSystem,
    from: StateId,
    region: &[bool],
) -> PathWitness {
    debug_assert!(region[from]);
    let terminal: Vec<bool> = (0..ts.len()).map(|s| ts.is_terminal(s)).collect();
    let outside: Vec<bool> = region.iter().map(|r| !r).collect();
    if let Some(p) = path_to_target(ts, from, &terminal, &outside) {
        return PathWitness::finite(p);
    }
    let mut states = vec![from];
    let mut pos = vec![usize::MAX; ts.len()];
    pos[from] = 0;
    let mut cur = from;
    loop {
        let next = *ts
            .successors(cur)
            .iter()
            .find(|&&t| region[t])
            .expect("closed region");
        if pos[next] != usize::MAX {
            return PathWitness {
                states,
                loop_start: Some(pos[next]),
            };
        }
        pos[next] = states.len();
        states.push(next);
        cur = next;
    }
}

/// Prepends `prefix` (ending in the first state of `rest`) to a path.
pub(crate) fn join(prefix: &[StateId], rest: PathWitness) -> PathWitness {
    let offset = prefix.len() - 1;
    let mut states = prefix[..offset].to_vec();
    states.extend(rest.states);
    PathWitness {
        states,
        loop_start: rest.loop_start.map(|k| k + offset),
    }
}
