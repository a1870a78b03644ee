//! Game graphs with edits applied, and the two fixpoints everything else is
//! built on: the reachability attractor and the safety region.

use std::collections::VecDeque;

use crate::model::{Game, Owner, Player, StateId, Strategy};

/// A game graph that may violate the [`Game`] invariants (dead ends,
/// retyped vertices). Dead ends are losing for Reach.
#[derive(Debug, Clone)]
pub(crate) struct Arena {
    pub owners: Vec<Owner>,
    pub succ: Vec<Vec<StateId>>,
    pub initial: StateId,
}

impl Arena {
    pub fn of(game: &Game) -> Self {
        Self {
            owners: game.owners().to_vec(),
            succ: (0..game.len())
                .map(|v| game.successors(v).to_vec())
                .collect(),
            initial: game.initial(),
        }
    }

    pub fn len(&self) -> usize {
        self.owners.len()
    }

    pub fn owned(&self, v: StateId, player: Player) -> bool {
        self.owners[v] == player.owner()
    }

    /// Keeps only σ's choice at the given vertices.
    pub fn pin(&mut self, sigma: &Strategy, vertices: impl IntoIterator<Item = StateId>) {
        for v in vertices {
            if let Some(c) = sigma.choice(v) {
                self.succ[v] = vec![c];
            }
        }
    }

    fn preds(&self) -> Vec<Vec<StateId>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, list) in self.succ.iter().enumerate() {
            for &w in list {
                pred[w].push(v);
            }
        }
        pred
    }

    /// Attractor of Reach to the effect vertices. `rank[v]` is the round in
    /// which `v` joins; `choice[v]` is the successor that attracted a Reach
    /// vertex.
    pub fn reach_attractor(&self) -> (Vec<Option<usize>>, Vec<Option<StateId>>) {
        let n = self.len();
        let pred = self.preds();
        let mut rank = vec![None; n];
        let mut choice = vec![None; n];
        let mut pending: Vec<usize> = self.succ.iter().map(Vec::len).collect();
        let mut queue = VecDeque::new();
        for v in (0..n).filter(|&v| self.owners[v] == Owner::Effect) {
            rank[v] = Some(0);
            queue.push_back(v);
        }
        while let Some(u) = queue.pop_front() {
            let r = rank[u].unwrap() + 1;
            for &p in &pred[u] {
                if rank[p].is_some() {
                    continue;
                }
                match self.owners[p] {
                    Owner::Reach => {
                        rank[p] = Some(r);
                        choice[p] = Some(u);
                        queue.push_back(p);
                    }
                    Owner::Safe => {
                        pending[p] -= 1;
                        if pending[p] == 0 {
                            rank[p] = Some(r);
                            queue.push_back(p);
                        }
                    }
                    Owner::Effect => {}
                }
            }
        }
        (rank, choice)
    }

    /// Vertices from which `player` can keep the play out of `bad` forever.
    /// Plays that stop (at effect vertices or dead ends) never visit `bad`
    /// again.
    pub fn safety_region(&self, player: Player, bad: &[bool]) -> Vec<bool> {
        let n = self.len();
        let pred = self.preds();
        let mut inside = vec![true; n];
        let mut pending: Vec<usize> = self.succ.iter().map(Vec::len).collect();
        let mut queue = VecDeque::new();
        for v in (0..n).filter(|&v| bad[v]) {
            inside[v] = false;
            queue.push_back(v);
        }
        while let Some(u) = queue.pop_front() {
            for &p in &pred[u] {
                if !inside[p] {
                    continue;
                }
                if self.owned(p, player) {
                    pending[p] -= 1;
                    if pending[p] > 0 {
                        continue;
                    }
                } else if self.owners[p] == Owner::Effect {
                    continue;
                }
                inside[p] = false;
                queue.push_back(p);
            }
        }
        inside
    }

    /// Vertices reachable from the initial vertex.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        seen[self.initial] = true;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.succ[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// A path from the initial vertex to a vertex in `target`.
    pub fn path_to(&self, target: &[bool]) -> Option<Vec<StateId>> {
        let mut parent = vec![usize::MAX; self.len()];
        parent[self.initial] = self.initial;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(v) = queue.pop_front() {
            if target[v] {
                let mut path = vec![v];
                let mut cur = v;
                while cur != self.initial {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.succ[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// A lasso (stem, cycle) from the initial vertex through non-effect
    /// vertices, if one exists. Every vertex occurs at most once.
    pub fn lasso(&self) -> Option<(Vec<StateId>, Vec<StateId>)> {
        // 0 = new, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.len()];
        let mut path: Vec<StateId> = vec![self.initial];
        let mut next: Vec<usize> = vec![0];
        if self.owners[self.initial] == Owner::Effect {
            return None;
        }
        state[self.initial] = 1;
        while let Some(&v) = path.last() {
            let k = *next.last().unwrap();
            if k < self.succ[v].len() {
                *next.last_mut().unwrap() += 1;
                let w = self.succ[v][k];
                if self.owners[w] == Owner::Effect {
                    continue;
                }
                match state[w] {
                    0 => {
                        state[w] = 1;
                        path.push(w);
                        next.push(0);
                    }
                    1 => {
                        let at = path.iter().position(|&x| x == w).unwrap();
                        return Some((path[..at].to_vec(), path[at..].to_vec()));
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                path.pop();
                next.pop();
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arena(owners: Vec<Owner>, edges: &[(usize, usize)]) -> Arena {
        let mut succ = vec![Vec::new(); owners.len()];
        for &(a, b) in edges {
            succ[a].push(b);
        }
        Arena {
            owners,
            succ,
            initial: 0,
        }
    }

    #[test]
    fn attractor_ranks_and_dead_ends() {
        use Owner::*;
        // 0 safe -> 1, 2 ; 1 reach -> 3 ; 2 safe dead end ; 3 effect
        let a = arena(vec![Safe, Reach, Safe, Effect], &[(0, 1), (0, 2), (1, 3)]);
        let (rank, choice) = a.reach_attractor();
        assert_eq!(rank, vec![None, Some(1), None, Some(0)]);
        assert_eq!(choice[1], Some(3));
        let b = arena(
            vec![Safe, Reach, Reach, Effect],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        );
        assert_eq!(b.reach_attractor().0[0], Some(2));
    }

    #[test]
    fn safety_region_and_lasso() {
        use Owner::*;
        // 0 reach -> 1, 2 ; 1 safe -> 0, 3 ; 2 reach -> 2 ; 3 effect
        let a = arena(
            vec![Reach, Safe, Reach, Effect],
            &[(0, 1), (0, 2), (1, 0), (1, 3), (2, 2)],
        );
        let bad = [false, false, true, false];
        assert_eq!(
            a.safety_region(Player::Reach, &bad),
            vec![true, true, false, true]
        );
        assert_eq!(
            a.safety_region(Player::Safe, &bad),
            vec![false, true, false, true]
        );
        let (stem, cycle) = a.lasso().unwrap();
        assert_eq!((stem, cycle), (vec![], vec![0, 1]));
        assert_eq!(a.path_to(&[false, false, false, true]), Some(vec![0, 1, 3]));
    }
}
