use std::fmt;

use serde::Serialize;

use super::Distance;
use crate::error::{Error, Result};

fn common_prefix<T: PartialEq>(u: &[T], v: &[T]) -> usize {
    u.iter().zip(v).take_while(|(a, b)| a == b).count()
}

/// Prefix distance on traces: `2^-n` for the longest common prefix length
/// `n`, and `0` for identical traces.
pub fn d_pref_ap<T: PartialEq>(u: &[T], v: &[T]) -> Distance {
    if u == v {
        Distance::ZERO
    } else {
        Distance::pow2_neg(common_prefix(u, v))
    }
}

/// Prefix distance on paths, comparing states instead of labels.
pub fn d_pref(p: &[usize], q: &[usize]) -> Distance {
    d_pref_ap(p, q)
}

/// Number of positions where two equal-length words differ.
pub fn hamming<T: PartialEq>(u: &[T], v: &[T]) -> Result<usize> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok(u.iter().zip(v).filter(|(a, b)| a != b).count())
}

pub fn d_hamm<T: PartialEq>(u: &[T], v: &[T]) -> Result<Distance> {
    hamming(u, v).map(Distance::from_count)
}

/// A symmetric similarity table over an alphabet of `n` symbols with a zero
/// diagonal, used by the weighted Hamming distance.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMetric {
    size: usize,
    table: Vec<f64>,
}

impl LabelMetric {
    pub fn new(size: usize, table: Vec<f64>) -> Result<Self> {
        if table.len() != size * size {
            return Err(Error::InvalidModel(format!(
                "label metric needs {} entries",
                size * size
            )));
        }
        for a in 0..size {
            if table[a * size + a] != 0.0 {
                return Err(Error::InvalidModel(
                    "label metric must vanish on equal labels".into(),
                ));
            }
            for b in 0..size {
                let x = table[a * size + b];
                if !(x >= 0.0 && x.is_finite()) {
                    return Err(Error::InvalidModel(
                        "label metric values must be finite and non-negative".into(),
                    ));
                }
                if x != table[b * size + a] {
                    return Err(Error::InvalidModel("label metric must be symmetric".into()));
                }
            }
        }
        Ok(Self { size, table })
    }

    /// The 0/1 metric, under which the weighted distance is plain Hamming.
    pub fn discrete(size: usize) -> Self {
        let table = (0..size * size)
            .map(|i| if i / size == i % size { 0.0 } else { 1.0 })
            .collect();
        Self { size, table }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.table[a * self.size + b]
    }
}

/// Weighted Hamming distance: the sum of label dissimilarities position by
/// position.
pub fn d_hamm_weighted<T, F>(u: &[T], v: &[T], metric: F) -> Result<Distance>
where
    F: Fn(&T, &T) -> f64,
{
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok(Distance::new(
        u.iter().zip(v).map(|(a, b)| metric(a, b)).sum(),
    ))
}

/// Generalized Hamming distance: Hamming distance between the shorter word
/// and the equally long prefix of the longer one, plus the length
/// difference.
pub fn d_ghamm<T: PartialEq>(u: &[T], v: &[T]) -> usize {
    let (short, long) = if u.len() <= v.len() { (u, v) } else { (v, u) };
    let mismatches = short.iter().zip(long).filter(|(a, b)| a != b).count();
    mismatches + (long.len() - short.len())
}

/// One letter of the edit alphabet; `None` stands for the empty symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EditSymbol<T> {
    pub left: Option<T>,
    pub right: Option<T>,
}

impl<T: PartialEq> EditSymbol<T> {
    pub fn new(left: Option<T>, right: Option<T>) -> Result<Self> {
        if left.is_none() && right.is_none() {
            return Err(Error::PreconditionViolated(
                "(ε, ε) is not an edit symbol".into(),
            ));
        }
        Ok(Self { left, right })
    }

    /// `(σ, σ)` symbols cost nothing, everything else costs one.
    pub fn is_match(&self) -> bool {
        matches!((&self.left, &self.right), (Some(a), Some(b)) if a == b)
    }
}

impl<T: fmt::Display> fmt::Display for EditSymbol<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: &Option<T>| x.as_ref().map_or("ε".to_string(), |x| x.to_string());
        write!(f, "({},{})", show(&self.left), show(&self.right))
    }
}

/// A word over the edit alphabet whose projections spell two words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct EditSequence<T> {
    pub symbols: Vec<EditSymbol<T>>,
}

impl<T: PartialEq + Clone> EditSequence<T> {
    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|s| !s.is_match()).count()
    }

    pub fn left(&self) -> Vec<T> {
        self.symbols.iter().filter_map(|s| s.left.clone()).collect()
    }

    pub fn right(&self) -> Vec<T> {
        self.symbols
            .iter()
            .filter_map(|s| s.right.clone())
            .collect()
    }

    /// Checks that this is an edit sequence for `u` and `v`.
    pub fn validate(&self, u: &[T], v: &[T]) -> Result<()> {
        if self
            .symbols
            .iter()
            .any(|s| s.left.is_none() && s.right.is_none())
        {
            return Err(Error::PreconditionViolated(
                "edit sequence contains (ε, ε)".into(),
            ));
        }
        if self.left() != u {
            return Err(Error::PreconditionViolated(
                "left projection differs from the first word".into(),
            ));
        }
        if self.right() != v {
            return Err(Error::PreconditionViolated(
                "right projection differs from the second word".into(),
            ));
        }
        Ok(())
    }
}

/// Levenshtein distance with a witnessing edit sequence of that weight.
///
/// Ties in the backtrace prefer match/substitution, then deletion, then
/// insertion, so the witness is deterministic.
pub fn d_lev<T: PartialEq + Clone>(u: &[T], v: &[T]) -> (usize, EditSequence<T>) {
    let (n, m) = (u.len(), v.len());
    let w = m + 1;
    let mut table = vec![0usize; (n + 1) * w];
    for i in 0..=n {
        table[i * w] = i;
    }
    for j in 0..=m {
        table[j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = table[(i - 1) * w + j - 1] + usize::from(u[i - 1] != v[j - 1]);
            let del = table[(i - 1) * w + j] + 1;
            let ins = table[i * w + j - 1] + 1;
            table[i * w + j] = sub.min(del).min(ins);
        }
    }
    let mut symbols = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = table[i * w + j];
        if i > 0 && j > 0 && here == table[(i - 1) * w + j - 1] + usize::from(u[i - 1] != v[j - 1])
        {
            symbols.push(EditSymbol {
                left: Some(u[i - 1].clone()),
                right: Some(v[j - 1].clone()),
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && here == table[(i - 1) * w + j] + 1 {
            symbols.push(EditSymbol {
                left: Some(u[i - 1].clone()),
                right: None,
            });
            i -= 1;
        } else {
            symbols.push(EditSymbol {
                left: None,
                right: Some(v[j - 1].clone()),
            });
            j -= 1;
        }
    }
    symbols.reverse();
    (table[n * w + m], EditSequence { symbols })
}
