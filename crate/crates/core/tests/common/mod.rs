//! Brute-force reference computations, written independently of the library
//! solvers: plain recursion and subset enumeration over the alive vertices.
#![allow(dead_code)]

use causal_mwis::{VertexId, Weight, WeightedGraph};

/// Alive vertices with bitmask adjacency (positions follow ascending id).
pub struct Dense {
    pub ids: Vec<VertexId>,
    pub w: Vec<Weight>,
    pub adj: Vec<u64>,
}

impl Dense {
    pub fn of(g: &WeightedGraph) -> Dense {
        let ids: Vec<VertexId> = g.vertices().collect();
        assert!(ids.len() <= 64, "oracle graphs must be small");
        let w = ids.iter().map(|&v| g.weight(v)).collect();
        let adj = ids
            .iter()
            .map(|&v| {
                ids.iter()
                    .enumerate()
                    .filter(|(_, &u)| g.is_adjacent(u, v))
                    .fold(0u64, |m, (j, _)| m | 1 << j)
            })
            .collect();
        Dense { ids, w, adj }
    }

    pub fn weight(&self, mask: u64) -> Weight {
        (0..self.ids.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.w[i])
            .sum()
    }

    pub fn independent(&self, mask: u64) -> bool {
        (0..self.ids.len()).all(|i| mask >> i & 1 == 0 || self.adj[i] & mask == 0)
    }

    pub fn to_ids(&self, mask: u64) -> Vec<VertexId> {
        (0..self.ids.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.ids[i])
            .collect()
    }

    pub fn mask_of(&self, set: &[VertexId]) -> u64 {
        set.iter()
            .map(|v| self.ids.iter().position(|x| x == v).expect("alive vertex"))
            .fold(0, |m, i| m | 1 << i)
    }

    pub fn full(&self) -> u64 {
        if self.ids.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.ids.len()) - 1
        }
    }

    fn rec(&self, cand: u64) -> Weight {
        if cand == 0 {
            return 0;
        }
        let i = cand.trailing_zeros() as usize;
        let rest = cand & !(1 << i);
        let skip = if self.adj[i] & rest == 0 {
            0
        } else {
            self.rec(rest)
        };
        skip.max(self.w[i] + self.rec(rest & !self.adj[i]))
    }

    pub fn alpha(&self) -> Weight {
        self.rec(self.full())
    }

    fn rec_set(&self, cand: u64) -> (Weight, u64) {
        if cand == 0 {
            return (0, 0);
        }
        let i = cand.trailing_zeros() as usize;
        let rest = cand & !(1 << i);
        let (tw, tm) = self.rec_set(rest & !self.adj[i]);
        let take = (tw + self.w[i], tm | 1 << i);
        if self.adj[i] & rest == 0 {
            return take;
        }
        let skip = self.rec_set(rest);
        if skip.0 > take.0 { skip } else { take }
    }

    /// One maximum weight independent set, as a mask.
    pub fn best_set(&self) -> u64 {
        self.rec_set(self.full()).1
    }

    /// N[mask]: the set plus all its neighbours.
    pub fn closed(&self, mask: u64) -> u64 {
        (0..self.ids.len()).filter(|i| mask >> i & 1 == 1).fold(mask, |m, i| m | self.adj[i])
    }

    /// Every independent set, as masks (2^n scan, keep n small).
    pub fn independent_sets(&self) -> Vec<u64> {
        assert!(self.ids.len() <= 20);
        (0..=self.full()).filter(|&m| self.independent(m)).collect()
    }

    pub fn all_mwis(&self) -> Vec<u64> {
        let sets = self.independent_sets();
        let best = sets.iter().map(|&m| self.weight(m)).max().unwrap_or(0);
        sets.into_iter()
            .filter(|&m| self.weight(m) == best)
            .collect()
    }
}

pub fn alpha(g: &WeightedGraph) -> Weight {
    Dense::of(g).alpha()
}

/// α_w of the alive graph with `removed` deleted.
pub fn alpha_without(g: &WeightedGraph, removed: &[VertexId]) -> Weight {
    let d = Dense::of(g);
    let gone = d.mask_of(removed);
    d.rec(d.full() & !gone)
}

pub fn is_independent(g: &WeightedGraph, set: &[VertexId]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !g.is_adjacent(u, v)))
}
