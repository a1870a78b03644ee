//! Boolean structural equation models and their view as tree-shaped
//! transition systems.
//!
//! Variable `X_i` is given by a truth table over the values of
//! `X_1 … X_{i-1}`; entry `k` of the table holds `f_i` at the valuation whose
//! `j`-th variable is bit `j` of `k`. Unrolling a model yields the tree of
//! partial valuations where every node has a `default` child (the value of
//! `f_i`) and an `intervention` child (its flip). But-for causes of the
//! model then correspond to Hamming causes on the default path.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{StateId, StateSet, TransitionSystem};
use crate::ts_causality::{check_cause, CauseQuery, CauseVerdict, Phi, TsMetric};

/// Total assignment of Boolean values to a prefix of the variables.
pub type Valuation = Vec<bool>;

/// Largest model that [`unroll_to_ts`] expands (2^21 − 1 nodes).
pub const MAX_UNROLL_VARIABLES: usize = 20;

pub const LABEL_DEFAULT: &str = "{}";
pub const LABEL_INTERVENTION: &str = "{intervention}";

/// A Boolean structural equation model without context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sem {
    variables: Vec<String>,
    tables: Vec<Vec<bool>>,
}

impl Sem {
    pub fn new(variables: Vec<String>, tables: Vec<Vec<bool>>) -> Result<Self> {
        let sem = Self { variables, tables };
        sem.validate()?;
        Ok(sem)
    }

    /// Builds a model from `f(i, prefix)`, where `prefix` holds the values of
    /// the first `i` variables. Variables are named `X1 … Xn`.
    pub fn from_fn(n: usize, f: impl Fn(usize, &[bool]) -> bool) -> Result<Self> {
        let variables = (1..=n).map(|i| format!("X{i}")).collect();
        let tables = (0..n)
            .map(|i| (0..1usize << i).map(|k| f(i, &bits(k, i))).collect())
            .collect();
        Self::new(variables, tables)
    }

    pub fn validate(&self) -> Result<()> {
        if self.variables.is_empty() {
            return Err(Error::InvalidModel(
                "a structural equation model needs at least one variable".into(),
            ));
        }
        if self.tables.len() != self.variables.len() {
            return Err(Error::InvalidModel(
                "every variable needs a truth table".into(),
            ));
        }
        if self.variables.len() > 62 {
            return Err(Error::InvalidModel("too many variables".into()));
        }
        for (i, t) in self.tables.iter().enumerate() {
            if t.len() != 1 << i {
                return Err(Error::InvalidModel(format!(
                    "truth table of `{}` has {} entries, expected {}",
                    self.variables[i],
                    t.len(),
                    1usize << i
                )));
            }
        }
        let mut seen = BTreeSet::new();
        if let Some(v) = self.variables.iter().find(|v| !seen.insert(v.as_str())) {
            return Err(Error::InvalidModel(format!("duplicate variable `{v}`")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn tables(&self) -> &[Vec<bool>] {
        &self.tables
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// `f_i` at the given values of the lower variables.
    pub fn eval(&self, i: usize, prefix: &[bool]) -> bool {
        self.tables[i][encode(&prefix[..i])]
    }

    /// Evaluates the model with the variables in `flipped` set by
    /// intervention to the negation of their equation's value.
    pub fn evaluate_flipping(&self, flipped: &BTreeSet<usize>) -> Valuation {
        let mut w = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let v = self.eval(i, &w);
            w.push(v != flipped.contains(&i));
        }
        w
    }
}

fn bits(k: usize, len: usize) -> Vec<bool> {
    (0..len).map(|j| k >> j & 1 == 1).collect()
}

fn encode(values: &[bool]) -> usize {
    values
        .iter()
        .enumerate()
        .map(|(j, &b)| usize::from(b) << j)
        .sum()
}

/// The valuation obtained without interventions.
pub fn evaluate_default(sem: &Sem) -> Valuation {
    sem.evaluate_flipping(&BTreeSet::new())
}

/// An effect: a set of full valuations, either listed or given as the
/// allowed values of the last `k` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EffectSpec {
    Valuations { valuations: Vec<Valuation> },
    Last { k: usize, values: Vec<Valuation> },
}

impl EffectSpec {
    /// The effect as an explicit set of full valuations.
    pub fn expand(&self, sem: &Sem) -> Result<BTreeSet<Valuation>> {
        let n = sem.len();
        match self {
            EffectSpec::Valuations { valuations } => {
                if let Some(v) = valuations.iter().find(|v| v.len() != n) {
                    return Err(Error::InvalidModel(format!(
                        "effect valuation of length {} for {n} variables",
                        v.len()
                    )));
                }
                Ok(valuations.iter().cloned().collect())
            }
            EffectSpec::Last { k, values } => {
                if *k > n {
                    return Err(Error::InvalidModel(format!(
                        "effect over the last {k} of {n} variables"
                    )));
                }
                if let Some(v) = values.iter().find(|v| v.len() != *k) {
                    return Err(Error::InvalidModel(format!(
                        "effect value of length {} for k = {k}",
                        v.len()
                    )));
                }
                let allowed: BTreeSet<&[bool]> = values.iter().map(Vec::as_slice).collect();
                Ok((0..1usize << n)
                    .map(|m| bits(m, n))
                    .filter(|w| allowed.contains(&w[n - k..]))
                    .collect())
            }
        }
    }
}

/// The unrolled tree of a model.
#[derive(Debug, Clone)]
pub struct UnrolledSem {
    pub ts: TransitionSystem,
    /// Partial valuation of every node; the root holds the empty one.
    pub valuations: Vec<Valuation>,
    /// Whether a node is entered by the `default` action; false at the root.
    pub by_default: Vec<bool>,
    /// The path that always takes `default`.
    pub default_path: Vec<StateId>,
}

impl UnrolledSem {
    /// The leaf holding a full valuation.
    pub fn leaf(&self, valuation: &[bool]) -> Option<StateId> {
        let n = self.default_path.len() - 1;
        (valuation.len() == n).then(|| node_id(valuation))
    }
}

/// Nodes are numbered level by level: the node for partial valuation `w`
/// has id `2^|w| − 1 + encode(w)`.
fn node_id(w: &[bool]) -> StateId {
    (1usize << w.len()) - 1 + encode(w)
}

/// Unrolls the model into its tree of partial valuations.
pub fn unroll_to_ts(sem: &Sem) -> Result<UnrolledSem> {
    let n = sem.len();
    if n > MAX_UNROLL_VARIABLES {
        return Err(Error::BudgetExceeded((1u64 << (n + 1)) - 1));
    }
    let total = (1usize << (n + 1)) - 1;
    let mut valuations = Vec::with_capacity(total);
    let mut by_default = Vec::with_capacity(total);
    let mut names = Vec::with_capacity(total);
    let mut edges = Vec::with_capacity(total - 1);
    for level in 0..=n {
        for k in 0..1usize << level {
            let w = bits(k, level);
            let id = node_id(&w);
            debug_assert_eq!(id, valuations.len());
            by_default.push(level > 0 && sem.eval(level - 1, &w) == w[level - 1]);
            names.push(if level == 0 {
                "root".to_string()
            } else {
                w.iter().map(|&b| if b { '1' } else { '0' }).collect()
            });
            if level < n {
                let mut child = w.clone();
                child.push(false);
                edges.push((id, node_id(&child)));
                child[level] = true;
                edges.push((id, node_id(&child)));
            }
            valuations.push(w);
        }
    }
    let labels = by_default
        .iter()
        .enumerate()
        .map(|(id, &d)| usize::from(id != 0 && !d))
        .collect();
    let alphabet = vec![LABEL_DEFAULT.to_string(), LABEL_INTERVENTION.to_string()];
    let ts = TransitionSystem::from_indices(alphabet, names, labels, 0, &edges)?;
    let default = evaluate_default(sem);
    let default_path = (0..=n).map(|l| node_id(&default[..l])).collect();
    Ok(UnrolledSem {
        ts,
        valuations,
        by_default,
        default_path,
    })
}

/// Whether `x` is a but-for cause of `effect`: flipping exactly the
/// variables in `x` leaves the effect, and no proper subset does.
pub fn is_but_for_cause(
    sem: &Sem,
    effect: &BTreeSet<Valuation>,
    x: &BTreeSet<usize>,
) -> Result<bool> {
    if !effect.contains(&evaluate_default(sem)) {
        return Err(Error::PreconditionViolated(
            "the default valuation is not in the effect".into(),
        ));
    }
    if let Some(&i) = x.iter().find(|&&i| i >= sem.len()) {
        return Err(Error::PreconditionViolated(format!(
            "variable index {i} is out of range"
        )));
    }
    let escapes = |y: &BTreeSet<usize>| !effect.contains(&sem.evaluate_flipping(y));
    if !escapes(x) {
        return Ok(false);
    }
    let members: Vec<usize> = x.iter().copied().collect();
    let full = (1u64 << members.len()) - 1;
    let minimal = (0..full).all(|mask| {
        let y = members
            .iter()
            .enumerate()
            .filter(|(j, _)| mask >> j & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        !escapes(&y)
    });
    Ok(minimal)
}

/// All but-for causes, by subset enumeration.
pub fn but_for_causes(sem: &Sem, effect: &BTreeSet<Valuation>) -> Result<Vec<BTreeSet<usize>>> {
    let n = sem.len();
    if n > MAX_UNROLL_VARIABLES {
        return Err(Error::BudgetExceeded(1u64 << n));
    }
    let mut out = Vec::new();
    for mask in 1..1u64 << n {
        let x: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if is_but_for_cause(sem, effect, &x)? {
            out.push(x);
        }
    }
    Ok(out)
}

/// `C_X`: the nodes entered by the `default` action at a variable of `x`.
pub fn butfor_to_cause_set(unrolled: &UnrolledSem, x: &BTreeSet<usize>) -> StateSet {
    (0..unrolled.valuations.len())
        .filter(|&s| unrolled.by_default[s] && x.contains(&(unrolled.valuations[s].len() - 1)))
        .collect()
}

/// Leaves of the unrolled tree that lie in the effect.
pub fn effect_leaves(unrolled: &UnrolledSem, effect: &BTreeSet<Valuation>) -> StateSet {
    effect.iter().filter_map(|w| unrolled.leaf(w)).collect()
}

/// Runs the Hamming cause check for `C_X` on the default path with the
/// effect leaves as `E`. `C_X` contains a leaf when `x` holds the last
/// variable, so the check permits `C ∩ E ≠ ∅`.
pub fn bridge_check(
    sem: &Sem,
    effect: &BTreeSet<Valuation>,
    x: &BTreeSet<usize>,
) -> Result<CauseVerdict> {
    let unrolled = unroll_to_ts(sem)?;
    let cause = butfor_to_cause_set(&unrolled, x);
    let leaves = effect_leaves(&unrolled, effect);
    let q = CauseQuery::new(
        &unrolled.ts,
        unrolled.default_path.clone(),
        cause,
        leaves,
        Phi::Reach,
        TsMetric::Hamm,
    )
    .allowing_overlap();
    check_cause(&q)
}
