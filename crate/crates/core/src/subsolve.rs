//! Exact MWIS on small induced subgraphs.
//!
//! Every α_w(G[X]) term in the conflict analyses goes through here, and the
//! test suites use it as the reference solver. Instances are bitmask-encoded,
//! so the hard ceiling is 64 vertices.

use thiserror::Error;

use crate::graph::{VertexId, Weight, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsolveBudget {
    /// Largest induced subgraph that will be solved.
    pub max_vertices: usize,
    /// Largest number of optimal sets [`enumerate_all_mwis`] will return.
    pub max_subsets: usize,
}

impl Default for SubsolveBudget {
    fn default() -> Self {
        SubsolveBudget { max_vertices: 16, max_subsets: 4096 }
    }
}

impl SubsolveBudget {
    /// Wide budget for reference computations in tests and verification.
    pub fn oracle() -> Self {
        SubsolveBudget { max_vertices: 40, max_subsets: 1 << 20 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubsolveError {
    #[error("subgraph has {size} vertices, budget allows {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("more than {cap} optimal sets")]
    TooManySolutions { cap: usize },
    #[error("vertex {0} is not alive")]
    DeadVertex(VertexId),
}

/// Induced subgraph packed into bitmasks, vertices in ascending id order.
struct Local {
    ids: Vec<VertexId>,
    weight: Vec<Weight>,
    nbr: Vec<u64>,
}

impl Local {
    fn build(
        g: &WeightedGraph,
        set: &[VertexId],
        budget: &SubsolveBudget,
    ) -> Result<Self, SubsolveError> {
        let mut ids = set.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let cap = budget.max_vertices.min(64);
        if ids.len() > cap {
            return Err(SubsolveError::CapExceeded { size: ids.len(), cap });
        }
        if let Some(&v) = ids.iter().find(|&&v| !g.is_alive(v)) {
            return Err(SubsolveError::DeadVertex(v));
        }
        let k = ids.len();
        let mut nbr = vec![0u64; k];
        for i in 0..k {
            for j in i + 1..k {
                if g.is_adjacent(ids[i], ids[j]) {
                    nbr[i] |= 1 << j;
                    nbr[j] |= 1 << i;
                }
            }
        }
        let weight = ids.iter().map(|&v| g.weight(v)).collect();
        Ok(Local { ids, weight, nbr })
    }

    fn full(&self) -> u64 {
        if self.ids.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.ids.len()) - 1
        }
    }

    fn mask_weight(&self, mut mask: u64) -> Weight {
        let mut total = 0;
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            total += self.weight[i];
            mask &= mask - 1;
        }
        total
    }

    fn to_ids(&self, mut mask: u64) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        while mask != 0 {
            out.push(self.ids[mask.trailing_zeros() as usize]);
            mask &= mask - 1;
        }
        out
    }

    // Include-first DFS over ascending positions; only strict improvements are
    // kept, so the first optimum reached is the lexicographically smallest.
    fn best(&self, cand: u64, cur: u64, cur_w: Weight, best: &mut (Weight, u64)) {
        if cand == 0 {
            if cur_w > best.0 {
                *best = (cur_w, cur);
            }
            return;
        }
        if cur_w + self.mask_weight(cand) <= best.0 {
            return;
        }
        let i = cand.trailing_zeros() as usize;
        let bit = 1u64 << i;
        self.best(cand & !bit & !self.nbr[i], cur | bit, cur_w + self.weight[i], best);
        self.best(cand & !bit, cur, cur_w, best);
    }

    fn all_best(
        &self,
        cand: u64,
        cur: u64,
        cur_w: Weight,
        best: &mut Weight,
        found: &mut Vec<u64>,
        cap: usize,
    ) -> Result<(), SubsolveError> {
        if cand == 0 {
            if cur_w > *best {
                *best = cur_w;
                found.clear();
            }
            if cur_w == *best {
                if found.len() == cap {
                    return Err(SubsolveError::TooManySolutions { cap });
                }
                found.push(cur);
            }
            return Ok(());
        }
        if cur_w + self.mask_weight(cand) < *best {
            return Ok(());
        }
        let i = cand.trailing_zeros() as usize;
        let bit = 1u64 << i;
        self.all_best(cand & !bit & !self.nbr[i], cur | bit, cur_w + self.weight[i], best, found, cap)?;
        // Skipping an isolated candidate can never be optimal with positive weights.
        if self.nbr[i] & cand != 0 {
            self.all_best(cand & !bit, cur, cur_w, best, found, cap)?;
        }
        Ok(())
    }
}

/// Maximum weight and the lexicographically smallest optimal set of G[set].
pub fn mwis_exact(
    g: &WeightedGraph,
    set: &[VertexId],
    budget: &SubsolveBudget,
) -> Result<(Weight, Vec<VertexId>), SubsolveError> {
    let local = Local::build(g, set, budget)?;
    let mut best = (0, 0u64);
    local.best(local.full(), 0, 0, &mut best);
    Ok((best.0, local.to_ids(best.1)))
}

/// α_w(G[set]).
pub fn alpha(
    g: &WeightedGraph,
    set: &[VertexId],
    budget: &SubsolveBudget,
) -> Result<Weight, SubsolveError> {
    mwis_exact(g, set, budget).map(|(w, _)| w)
}

/// Every maximum weight independent set of G[set], each sorted ascending,
/// listed in lexicographic order.
pub fn enumerate_all_mwis(
    g: &WeightedGraph,
    set: &[VertexId],
    budget: &SubsolveBudget,
) -> Result<Vec<Vec<VertexId>>, SubsolveError> {
    let local = Local::build(g, set, budget)?;
    let mut best = 0;
    let mut found = Vec::new();
    local.all_best(local.full(), 0, 0, &mut best, &mut found, budget.max_subsets.max(1))?;
    Ok(found.into_iter().map(|m| local.to_ids(m)).collect())
}

/// Exact MWIS of the whole alive graph.
pub fn mwis_of_graph(
    g: &WeightedGraph,
    budget: &SubsolveBudget,
) -> Result<(Weight, Vec<VertexId>), SubsolveError> {
    let all: Vec<VertexId> = g.vertices().collect();
    mwis_exact(g, &all, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[usize]) -> Vec<VertexId> {
        v.iter().map(|&i| VertexId::new(i)).collect()
    }

    fn path(weights: &[Weight]) -> WeightedGraph {
        let edges: Vec<_> = (1..weights.len()).map(|i| (i - 1, i)).collect();
        WeightedGraph::from_edges(weights.len(), &edges, weights.to_vec()).unwrap()
    }

    #[test]
    fn empty_set() {
        let g = path(&[1, 2]);
        assert_eq!(mwis_exact(&g, &[], &SubsolveBudget::default()).unwrap(), (0, vec![]));
    }

    #[test]
    fn triangle_picks_heaviest() {
        let g = WeightedGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], vec![5, 2, 9]).unwrap();
        assert_eq!(mwis_of_graph(&g, &SubsolveBudget::default()).unwrap(), (9, ids(&[2])));
    }

    #[test]
    fn p3_middle() {
        let g = path(&[1, 3, 1]);
        assert_eq!(mwis_of_graph(&g, &SubsolveBudget::default()).unwrap(), (3, ids(&[1])));
    }

    #[test]
    fn lexicographic_witness() {
        // P4 (2,3,2,1): {0,2} and {1,3} both weigh 4
        let g = path(&[2, 3, 2, 1]);
        assert_eq!(mwis_of_graph(&g, &SubsolveBudget::default()).unwrap(), (4, ids(&[0, 2])));
    }

    #[test]
    fn enumerate_p4_and_p3() {
        let g = path(&[2, 3, 2, 1]);
        let all: Vec<_> = g.vertices().collect();
        assert_eq!(
            enumerate_all_mwis(&g, &all, &SubsolveBudget::default()).unwrap(),
            vec![ids(&[0, 2]), ids(&[1, 3])]
        );
        let g = path(&[1, 3, 2]);
        let all: Vec<_> = g.vertices().collect();
        assert_eq!(
            enumerate_all_mwis(&g, &all, &SubsolveBudget::default()).unwrap(),
            vec![ids(&[0, 2]), ids(&[1])]
        );
        let g = WeightedGraph::with_weights(vec![4]).unwrap();
        assert_eq!(
            enumerate_all_mwis(&g, &ids(&[0]), &SubsolveBudget::default()).unwrap(),
            vec![ids(&[0])]
        );
    }

    #[test]
    fn cap_is_enforced() {
        let g = WeightedGraph::with_weights(vec![1; 20]).unwrap();
        let all: Vec<_> = g.vertices().collect();
        assert_eq!(
            alpha(&g, &all, &SubsolveBudget::default()),
            Err(SubsolveError::CapExceeded { size: 20, cap: 16 })
        );
        let tight = SubsolveBudget { max_vertices: 20, max_subsets: 4096 };
        assert_eq!(alpha(&g, &all, &tight), Ok(20));
    }

    #[test]
    fn too_many_optima() {
        // perfect matching on 2k vertices with equal weights has 2^k optima
        let edges: Vec<_> = (0..6).map(|i| (2 * i, 2 * i + 1)).collect();
        let g = WeightedGraph::from_edges(12, &edges, vec![1; 12]).unwrap();
        let all: Vec<_> = g.vertices().collect();
        let budget = SubsolveBudget { max_vertices: 16, max_subsets: 10 };
        assert_eq!(
            enumerate_all_mwis(&g, &all, &budget),
            Err(SubsolveError::TooManySolutions { cap: 10 })
        );
        let budget = SubsolveBudget { max_vertices: 16, max_subsets: 64 };
        assert_eq!(enumerate_all_mwis(&g, &all, &budget).unwrap().len(), 64);
    }
}
