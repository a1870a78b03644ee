//! Weighted graphs with non-negative weights and single-source shortest
//! paths, used by the Hamming, generalized Hamming and Levenshtein
//! checkers.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::Add;

/// How an edge of a product graph moves in the underlying system: `Step`
/// follows one transition, `Stay` keeps the system state (it only advances
/// the position on the reference path).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Step,
    Stay,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge<W> {
    pub to: usize,
    pub weight: W,
    pub kind: EdgeKind,
}

/// A directed graph with a start node and edge weights `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<W> {
    adj: Vec<Vec<Edge<W>>>,
    start: usize,
}

impl<W: Copy + Ord + Add<Output = W> + Default> WeightedGraph<W> {
    pub fn new(nodes: usize, start: usize) -> Self {
        assert!(start < nodes, "start node out of range");
        Self {
            adj: vec![Vec::new(); nodes],
            start,
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, weight: W, kind: EdgeKind) {
        assert!(weight >= W::default(), "negative edge weight");
        self.adj[from].push(Edge { to, weight, kind });
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn edges(&self, node: usize) -> &[Edge<W>] {
        &self.adj[node]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Dijkstra from the start node. Nodes are settled in order of
    /// (distance, index) and predecessors are only replaced on strict
    /// improvement, so the result is deterministic.
    pub fn shortest_paths(&self) -> ShortestPaths<W> {
        let n = self.len();
        let mut dist: Vec<Option<W>> = vec![None; n];
        let mut pred: Vec<Option<(usize, EdgeKind)>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[self.start] = Some(W::default());
        heap.push(Reverse((W::default(), self.start)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for e in &self.adj[u] {
                let nd = d + e.weight;
                if !done[e.to] && dist[e.to].is_none_or(|old| nd < old) {
                    dist[e.to] = Some(nd);
                    pred[e.to] = Some((u, e.kind));
                    heap.push(Reverse((nd, e.to)));
                }
            }
        }
        ShortestPaths {
            start: self.start,
            dist,
            pred,
        }
    }
}

/// Result of [`WeightedGraph::shortest_paths`].
#[derive(Debug, Clone)]
pub struct ShortestPaths<W> {
    start: usize,
    dist: Vec<Option<W>>,
    pred: Vec<Option<(usize, EdgeKind)>>,
}

impl<W: Copy> ShortestPaths<W> {
    pub fn distance(&self, node: usize) -> Option<W> {
        self.dist[node]
    }

    /// The route from the start node to `node`: the start node followed by
    /// the kind and target of every edge taken.
    pub fn route(&self, node: usize) -> Option<(usize, Vec<(EdgeKind, usize)>)> {
        self.dist[node]?;
        let mut steps = Vec::new();
        let mut cur = node;
        while cur != self.start {
            let (p, kind) = self.pred[cur].expect("settled nodes have predecessors");
            steps.push((kind, cur));
            cur = p;
        }
        steps.reverse();
        Some((self.start, steps))
    }
}
