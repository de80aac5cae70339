//! Independent-set checks against an original graph, with the complementary
//! vertex cover reported alongside.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{VertexId, Weight, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("vertices {0} and {1} are adjacent")]
    NotIndependent(usize, usize),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("edge ({0}, {1}) is not covered")]
    UncoveredEdge(usize, usize),
    #[error("vertex {0} is listed twice")]
    Duplicate(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub size: usize,
    pub weight: Weight,
    pub independent: bool,
    pub cover_size: usize,
    pub cover_weight: Weight,
    pub cover_valid: bool,
}

/// Checks that `ids` is an independent set of `g`. The first adjacent pair
/// found (smallest vertex first) is reported.
pub fn verify(g: &WeightedGraph, ids: &[usize]) -> Result<VerifyReport, VerifyError> {
    let mut chosen = vec![false; g.capacity()];
    for &v in ids {
        if v >= g.capacity() || !g.is_alive(VertexId::new(v)) {
            return Err(VerifyError::UnknownVertex(v));
        }
        if std::mem::replace(&mut chosen[v], true) {
            return Err(VerifyError::Duplicate(v));
        }
    }
    let mut sorted = ids.to_vec();
    sorted.sort_unstable();
    for &v in &sorted {
        if let Some(u) = g.neighbors(VertexId::new(v)).find(|u| u.index() > v && chosen[u.index()]) {
            return Err(VerifyError::NotIndependent(v, u.index()));
        }
    }
    let weight: Weight = ids.iter().map(|&v| g.weight(VertexId::new(v))).sum();
    let total: Weight = g.vertices().map(|v| g.weight(v)).sum();
    // The complement covers every edge iff no edge has both ends chosen.
    let cover_valid = g
        .vertices()
        .filter(|v| chosen[v.index()])
        .all(|v| g.neighbors(v).all(|u| !chosen[u.index()]));
    Ok(VerifyReport {
        size: ids.len(),
        weight,
        independent: true,
        cover_size: g.alive_count() - ids.len(),
        cover_weight: total - weight,
        cover_valid,
    })
}

/// Checks that `cover` touches every edge; returns its weight.
pub fn verify_cover(g: &WeightedGraph, cover: &[usize]) -> Result<Weight, VerifyError> {
    let mut chosen = vec![false; g.capacity()];
    for &v in cover {
        if v >= g.capacity() || !g.is_alive(VertexId::new(v)) {
            return Err(VerifyError::UnknownVertex(v));
        }
        if std::mem::replace(&mut chosen[v], true) {
            return Err(VerifyError::Duplicate(v));
        }
    }
    for v in g.vertices() {
        if let Some(u) = g.neighbors(v).find(|&u| u > v && !chosen[v.index()] && !chosen[u.index()]) {
            return Err(VerifyError::UncoveredEdge(v.index(), u.index()));
        }
    }
    Ok(cover.iter().map(|&v| g.weight(VertexId::new(v))).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> WeightedGraph {
        WeightedGraph::from_edges(3, &[(0, 1), (1, 2)], vec![1, 3, 1]).unwrap()
    }

    #[test]
    fn middle_of_p3() {
        let r = verify(&p3(), &[1]).unwrap();
        assert_eq!((r.weight, r.independent), (3, true));
        assert_eq!((r.cover_size, r.cover_weight, r.cover_valid), (2, 2, true));
    }

    #[test]
    fn adjacent_pair() {
        assert_eq!(verify(&p3(), &[1, 0]), Err(VerifyError::NotIndependent(0, 1)));
    }

    #[test]
    fn empty_solution() {
        let r = verify(&p3(), &[]).unwrap();
        assert_eq!((r.weight, r.cover_weight, r.cover_valid), (0, 5, true));
    }

    #[test]
    fn bad_ids() {
        assert_eq!(verify(&p3(), &[3]), Err(VerifyError::UnknownVertex(3)));
        assert_eq!(verify(&p3(), &[0, 0]), Err(VerifyError::Duplicate(0)));
    }

    #[test]
    fn covers() {
        assert_eq!(verify_cover(&p3(), &[1]), Ok(3));
        assert_eq!(verify_cover(&p3(), &[0, 2]), Ok(2));
        assert_eq!(verify_cover(&p3(), &[0]), Err(VerifyError::UncoveredEdge(1, 2)));
    }
}
