use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

/// Index of a state (or game vertex) inside its model.
pub type StateId = usize;

/// A set of states, ordered so that iteration is deterministic.
pub type StateSet = BTreeSet<StateId>;

/// Index of a symbol in a model's declared alphabet.
pub type Label = usize;

/// A finite labeled transition system with an initial state.
///
/// States carry opaque string identifiers; internally everything is indexed
/// by [`StateId`]. Successor lists are sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    alphabet: Vec<String>,
    names: Vec<String>,
    index: HashMap<String, StateId>,
    labels: Vec<Label>,
    succ: Vec<Vec<StateId>>,
    initial: StateId,
}

impl TransitionSystem {
    /// Builds a system from named states. `states` pairs each identifier
    /// with its label symbol.
    pub fn new(
        alphabet: Vec<String>,
        states: Vec<(String, String)>,
        initial: &str,
        transitions: &[(String, String)],
    ) -> Result<Self> {
        let symbol_index = index_unique(&alphabet, "alphabet symbol")?;
        let names: Vec<String> = states.iter().map(|(n, _)| n.clone()).collect();
        let index = index_unique(&names, "state id")?;
        let mut labels = Vec::with_capacity(states.len());
        for (name, label) in &states {
            let l = symbol_index.get(label).copied().ok_or_else(|| {
                Error::InvalidModel(format!(
                    "label `{label}` of state `{name}` is not in the alphabet"
                ))
            })?;
            labels.push(l);
        }
        let init = *index.get(initial).ok_or_else(|| {
            Error::InvalidModel(format!("initial state `{initial}` is not declared"))
        })?;
        let mut edges = Vec::with_capacity(transitions.len());
        for (a, b) in transitions {
            let lookup = |s: &String| {
                index.get(s).copied().ok_or_else(|| {
                    Error::InvalidModel(format!(
                        "transition endpoint `{s}` is not a declared state"
                    ))
                })
            };
            edges.push((lookup(a)?, lookup(b)?));
        }
        Self::from_indices(alphabet, names, labels, init, &edges)
    }

    /// Builds a system from already indexed parts.
    pub fn from_indices(
        alphabet: Vec<String>,
        names: Vec<String>,
        labels: Vec<Label>,
        initial: StateId,
        edges: &[(StateId, StateId)],
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidModel(
                "a transition system needs at least one state".into(),
            ));
        }
        if labels.len() != n {
            return Err(Error::InvalidModel("labeling must be total".into()));
        }
        index_unique(&alphabet, "alphabet symbol")?;
        let index = index_unique(&names, "state id")?;
        if let Some((s, _)) = labels
            .iter()
            .enumerate()
            .find(|(_, &l)| l >= alphabet.len())
        {
            return Err(Error::InvalidModel(format!(
                "label of state `{}` is not in the alphabet",
                names[s]
            )));
        }
        if initial >= n {
            return Err(Error::InvalidModel("initial state is not declared".into()));
        }
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidModel(
                    "transition endpoint is not a declared state".into(),
                ));
            }
            succ[a].push(b);
        }
        for list in &mut succ {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self {
            alphabet,
            names,
            index,
            labels,
            succ,
            initial,
        })
    }

    /// Re-checks the structural invariants. Construction already enforces
    /// them, so this only fails for hand-assembled inconsistent data.
    pub fn validate(&self) -> Result<()> {
        Self::from_indices(
            self.alphabet.clone(),
            self.names.clone(),
            self.labels.clone(),
            self.initial,
            &self.edges().collect::<Vec<_>>(),
        )
        .map(|_| ())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.succ[s]
    }

    pub fn label(&self, s: StateId) -> Label {
        self.labels[s]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label_name(&self, s: StateId) -> &str {
        &self.alphabet[self.labels[s]]
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    /// Resolves a list of identifiers, failing on the first unknown one.
    pub fn ids<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<StateId>> {
        names
            .iter()
            .map(|n| {
                self.id(n.as_ref())
                    .ok_or_else(|| Error::UnknownId(n.as_ref().to_string()))
            })
            .collect()
    }

    pub fn is_terminal(&self, s: StateId) -> bool {
        self.succ[s].is_empty()
    }

    pub fn terminals(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.len()).filter(move |&s| self.is_terminal(s))
    }

    pub fn edges(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().map(move |&b| (a, b)))
    }

    pub fn predecessors(&self) -> Vec<Vec<StateId>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (a, b) in self.edges() {
            pred[b].push(a);
        }
        pred
    }

    pub fn trace(&self, path: &[StateId]) -> Vec<Label> {
        path.iter().map(|&s| self.labels[s]).collect()
    }

    /// The same system with every state labeled by its own identifier, so
    /// that trace distances become path distances.
    pub fn with_unique_labels(&self) -> TransitionSystem {
        TransitionSystem {
            alphabet: self.names.clone(),
            names: self.names.clone(),
            index: self.index.clone(),
            labels: (0..self.len()).collect(),
            succ: self.succ.clone(),
            initial: self.initial,
        }
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            for &t in &self.succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// True if no cycle is reachable from the initial state.
    pub fn is_acyclic(&self) -> bool {
        topological_order(self.len(), |s| &self.succ[s], self.initial).is_some()
    }

    /// Resolves and validates a sequence of identifiers as a maximal finite
    /// path.
    pub fn maximal_path_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<MaximalFinitePath> {
        let ids = names
            .iter()
            .map(|n| {
                self.id(n.as_ref())
                    .ok_or_else(|| Error::NotAPath(format!("unknown state `{}`", n.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        validate_maximal_path(self, &ids)
    }
}

pub(crate) fn index_unique(items: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        if index.insert(item.clone(), i).is_some() {
            return Err(Error::InvalidModel(format!("duplicate {what} `{item}`")));
        }
    }
    Ok(index)
}

/// Topological order of the part reachable from `start`, or `None` if that
/// part contains a cycle.
pub(crate) fn topological_order<'a, F>(n: usize, succ: F, start: usize) -> Option<Vec<usize>>
where
    F: Fn(usize) -> &'a [usize],
{
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut order = Vec::new();
    let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
    state[start] = 1;
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        let list = succ(v);
        if *i < list.len() {
            let w = list[*i];
            *i += 1;
            match state[w] {
                0 => {
                    state[w] = 1;
                    stack.push((w, 0));
                }
                1 => return None,
                _ => {}
            }
        } else {
            state[v] = 2;
            order.push(v);
            stack.pop();
        }
    }
    order.reverse();
    Some(order)
}

/// A finite path from the initial state that ends in a terminal state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaximalFinitePath {
    states: Vec<StateId>,
}

impl MaximalFinitePath {
    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> StateId {
        *self.states.last().expect("maximal paths are non-empty")
    }

    pub fn visits(&self, set: &StateSet) -> bool {
        self.states.iter().any(|s| set.contains(s))
    }
}

pub fn validate_maximal_path(
    ts: &TransitionSystem,
    sequence: &[StateId],
) -> Result<MaximalFinitePath> {
    let Some(&first) = sequence.first() else {
        return Err(Error::NotAPath("empty sequence".into()));
    };
    if let Some(&bad) = sequence.iter().find(|&&s| s >= ts.len()) {
        return Err(Error::NotAPath(format!(
            "state index {bad} is out of range"
        )));
    }
    if first != ts.initial() {
        return Err(Error::NotAPath(format!(
            "path starts at `{}`, not at the initial state",
            ts.name(first)
        )));
    }
    for w in sequence.windows(2) {
        if ts.successors(w[0]).binary_search(&w[1]).is_err() {
            return Err(Error::NotAPath(format!(
                "no transition `{}` -> `{}`",
                ts.name(w[0]),
                ts.name(w[1])
            )));
        }
    }
    let last = *sequence.last().unwrap();
    if !ts.is_terminal(last) {
        return Err(Error::NotMaximal(format!(
            "last state `{}` has successors",
            ts.name(last)
        )));
    }
    Ok(MaximalFinitePath {
        states: sequence.to_vec(),
    })
}

pub(crate) fn mask(n: usize, set: &StateSet) -> Vec<bool> {
    let mut m = vec![false; n];
    for &s in set {
        if s < n {
            m[s] = true;
        }
    }
    m
}

/// States from which some maximal path (finite ending in a terminal state,
/// or infinite) never visits `avoid`. Greatest fixpoint: a state qualifies
/// iff it is outside `avoid` and it is terminal or has a qualifying
/// successor.
pub fn maximal_avoiding_region(ts: &TransitionSystem, avoid: &[bool]) -> Vec<bool> {
    let n = ts.len();
    let pred = ts.predecessors();
    let mut good: Vec<bool> = (0..n).map(|s| !avoid[s]).collect();
    let mut live: Vec<usize> = (0..n)
        .map(|s| ts.successors(s).iter().filter(|&&t| good[t]).count())
        .collect();
    let mut queue: VecDeque<usize> = (0..n)
        .filter(|&s| good[s] && !ts.is_terminal(s) && live[s] == 0)
        .collect();
    for &s in &queue {
        good[s] = false;
    }
    while let Some(s) = queue.pop_front() {
        for &p in &pred[s] {
            if good[p] {
                live[p] -= 1;
                if live[p] == 0 {
                    good[p] = false;
                    queue.push_back(p);
                }
            }
        }
    }
    good
}

/// Whether some maximal path from `from` never visits `avoid`.
pub fn exists_maximal_path_avoiding(
    ts: &TransitionSystem,
    from: StateId,
    avoid: &StateSet,
) -> bool {
    maximal_avoiding_region(ts, &mask(ts.len(), avoid))[from]
}

/// States that can reach `target` without visiting `avoid` on the way or
/// at the target itself.
pub fn reach_avoiding_region(ts: &TransitionSystem, target: &[bool], avoid: &[bool]) -> Vec<bool> {
    let n = ts.len();
    let pred = ts.predecessors();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if target[s] && !avoid[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        for &p in &pred[s] {
            if !seen[p] && !avoid[p] {
                seen[p] = true;
                queue.push_back(p);
            }
        }
    }
    seen
}

/// Whether some path from `from` reaches `target` while never visiting
/// `avoid` before or at the target.
pub fn exists_path_reaching_avoiding(
    ts: &TransitionSystem,
    from: StateId,
    target: &StateSet,
    avoid: &StateSet,
) -> bool {
    if avoid.contains(&from) {
        return false;
    }
    let mut seen = vec![false; ts.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(s) = queue.pop_front() {
        if target.contains(&s) {
            return true;
        }
        for &t in ts.successors(s) {
            if !seen[t] && !avoid.contains(&t) {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    false
}

/// Assigns every reachable state its depth when all maximal paths have the
/// same length. Returns the depth vector (`None` for unreachable states)
/// and the common number of states on a maximal path.
pub fn validate_layered(ts: &TransitionSystem) -> Result<(Vec<Option<usize>>, usize)> {
    if !ts.is_acyclic() {
        return Err(Error::NotLayered(
            "a cycle is reachable from the initial state".into(),
        ));
    }
    let mut depth: Vec<Option<usize>> = vec![None; ts.len()];
    depth[ts.initial()] = Some(0);
    let mut queue = VecDeque::from([ts.initial()]);
    let mut terminal_depth: Option<usize> = None;
    while let Some(s) = queue.pop_front() {
        let d = depth[s].unwrap();
        if ts.is_terminal(s) {
            match terminal_depth {
                None => terminal_depth = Some(d),
                Some(k) if k != d => {
                    return Err(Error::NotLayered(format!(
                        "terminal states at depths {k} and {d} (e.g. `{}`)",
                        ts.name(s)
                    )))
                }
                _ => {}
            }
        }
        for &t in ts.successors(s) {
            match depth[t] {
                None => {
                    depth[t] = Some(d + 1);
                    queue.push_back(t);
                }
                Some(e) if e != d + 1 => {
                    return Err(Error::NotLayered(format!(
                        "state `{}` lies at depths {e} and {}",
                        ts.name(t),
                        d + 1
                    )))
                }
                _ => {}
            }
        }
    }
    Ok((
        depth,
        terminal_depth.expect("acyclic systems have a reachable terminal") + 1,
    ))
}
