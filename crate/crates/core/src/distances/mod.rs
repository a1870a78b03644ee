//! Distances between traces, paths, plays and memoryless strategies.

pub mod reference;
mod strategy;
mod word;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

pub(crate) use strategy::max_marked_on_paths;
pub use strategy::{d_hamm_s, d_pref_hausdorff, dstar, dstrat, play_dist, Budget, DEFAULT_BUDGET};
pub use word::{
    d_ghamm, d_hamm, d_hamm_weighted, d_lev, d_pref, d_pref_ap, hamming, EditSequence, EditSymbol,
    LabelMetric,
};

/// A non-negative distance value, possibly `+∞`.
///
/// Values produced by this crate are dyadic rationals or small integers, so
/// they are exact in `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance(f64);

impl Distance {
    pub const ZERO: Distance = Distance(0.0);
    pub const INFINITY: Distance = Distance(f64::INFINITY);

    pub fn new(value: f64) -> Self {
        assert!(value >= 0.0, "distances are non-negative, got {value}");
        Distance(value)
    }

    pub fn from_count(n: usize) -> Self {
        Distance(n as f64)
    }

    /// `2^-n`.
    pub fn pow2_neg(n: usize) -> Self {
        Distance(0.5f64.powi(n.min(i32::MAX as usize) as i32))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl Default for Distance {
    fn default() -> Self {
        Distance::ZERO
    }
}

impl Eq for Distance {}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for Distance {
    type Output = Distance;
    fn add(self, rhs: Distance) -> Distance {
        Distance(self.0 + rhs.0)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else if self.0.fract() == 0.0 && self.0 < 9.0e15 {
            serializer.serialize_u64(self.0 as u64)
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_formatting() {
        assert!(Distance::ZERO < Distance::pow2_neg(3));
        assert!(Distance::pow2_neg(3) < Distance::pow2_neg(2));
        assert!(Distance::from_count(7) < Distance::INFINITY);
        assert_eq!(Distance::pow2_neg(2).to_string(), "0.25");
        assert_eq!(Distance::INFINITY.to_string(), "inf");
        assert_eq!(
            serde_json::to_string(&Distance::from_count(2)).unwrap(),
            "2"
        );
        assert_eq!(
            serde_json::to_string(&Distance::pow2_neg(1)).unwrap(),
            "0.5"
        );
        assert_eq!(
            serde_json::to_string(&Distance::INFINITY).unwrap(),
            "\"inf\""
        );
    }
}
