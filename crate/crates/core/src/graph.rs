//! Vertex-weighted undirected graph with flag-based deletion, contraction,
//! an optional undo journal, and the reduction trace used to lift kernel
//! solutions back to the input graph.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex weights are positive integers.
pub type Weight = i64;

/// Largest per-vertex weight accepted at load time. Keeps every set weight
/// far away from `i64` overflow.
pub const MAX_VERTEX_WEIGHT: Weight = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(u32);

impl VertexId {
    #[inline]
    pub fn new(index: usize) -> Self {
        debug_assert!(index <= u32::MAX as usize);
        VertexId(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId::new(i)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("vertex {0} has non-positive weight")]
    ZeroWeight(usize),
    #[error("vertex {vertex} has weight {weight}, above the supported maximum {MAX_VERTEX_WEIGHT}")]
    WeightTooLarge { vertex: usize, weight: Weight },
    #[error("vertex {0} is not alive")]
    DeadVertex(VertexId),
    #[error("vertices {0} and {1} are adjacent")]
    AdjacentMembers(VertexId, VertexId),
    #[error("contraction needs at least two vertices")]
    SetTooSmall,
    #[error("vertex {0} is not a pendant")]
    NotPendant(VertexId),
    #[error("invalid kernel solution: {0}")]
    InvalidKernelSolution(String),
}

#[derive(Clone, Debug)]
enum Change {
    Kill(VertexId),
    SetWeight(VertexId, Weight),
    Spawn(VertexId),
}

/// Opaque position in the undo journal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checkpoint(usize);

#[derive(Clone, Debug)]
pub struct WeightedGraph {
    adj: Vec<Vec<VertexId>>,
    weight: Vec<Weight>,
    alive: Vec<bool>,
    // number of alive neighbours; frozen while the vertex itself is dead
    degree: Vec<u32>,
    alive_count: usize,
    edge_count: usize,
    original_len: usize,
    journal: Option<Vec<Change>>,
}

impl WeightedGraph {
    /// Builds a graph on `n` vertices (ids `0..n`). Duplicate edges are merged,
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize)],
        weights: Vec<Weight>,
    ) -> Result<Self, GraphError> {
        if weights.len() != n {
            return Err(GraphError::MalformedInput(format!(
                "expected {n} weights, got {}",
                weights.len()
            )));
        }
        if n > u32::MAX as usize {
            return Err(GraphError::MalformedInput("too many vertices".into()));
        }
        for (i, &w) in weights.iter().enumerate() {
            if w <= 0 {
                return Err(GraphError::ZeroWeight(i));
            }
            if w > MAX_VERTEX_WEIGHT {
                return Err(GraphError::WeightTooLarge { vertex: i, weight: w });
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::MalformedInput(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(GraphError::MalformedInput(format!("self-loop on vertex {u}")));
            }
            adj[u].push(VertexId::new(v));
            adj[v].push(VertexId::new(u));
        }
        let mut edge_count = 0;
        let mut degree = Vec::with_capacity(n);
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
            degree.push(list.len() as u32);
        }
        Ok(WeightedGraph {
            adj,
            weight: weights,
            alive: vec![true; n],
            degree,
            alive_count: n,
            edge_count: edge_count / 2,
            original_len: n,
            journal: None,
        })
    }

    /// Edgeless graph with the given weights.
    pub fn with_weights(weights: Vec<Weight>) -> Result<Self, GraphError> {
        let n = weights.len();
        Self::from_edges(n, &[], weights)
    }

    /// Number of ids ever allocated (alive or dead, including contractions).
    pub fn capacity(&self) -> usize {
        self.adj.len()
    }

    /// Number of vertices the graph was built with.
    pub fn original_len(&self) -> usize {
        self.original_len
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.alive_count == 0
    }

    #[inline]
    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive.get(v.index()).copied().unwrap_or(false)
    }

    #[inline]
    pub fn weight(&self, v: VertexId) -> Weight {
        self.weight[v.index()]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v.index()] as usize
    }

    /// Alive neighbours of `v` in ascending id order.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v.index()].iter().copied().filter(move |u| self.alive[u.index()])
    }

    /// Alive vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| VertexId::new(i))
    }

    pub fn total_weight(&self) -> Weight {
        self.vertices().map(|v| self.weight(v)).sum()
    }

    pub fn weight_of(&self, set: &[VertexId]) -> Weight {
        set.iter().map(|&v| self.weight(v)).sum()
    }

    /// True when both endpoints are alive and joined by an edge.
    pub fn is_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        if u == v || !self.is_alive(u) || !self.is_alive(v) {
            return false;
        }
        let (a, b) = if self.adj[u.index()].len() <= self.adj[v.index()].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a.index()].binary_search(&b).is_ok()
    }

    pub fn is_independent(&self, set: &[VertexId]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.is_adjacent(u, v)))
    }

    /// Open neighbourhood N(S) of a vertex set, ascending.
    pub fn set_neighborhood(&self, set: &[VertexId]) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = set
            .iter()
            .flat_map(|&v| self.neighbors(v))
            .filter(|u| !set.contains(u))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Alive vertices at distance exactly two from `v`.
    pub fn second_neighborhood(&self, v: VertexId) -> Result<Vec<VertexId>, GraphError> {
        self.ensure_alive(v)?;
        let mut out: Vec<VertexId> = self
            .neighbors(v)
            .flat_map(|u| self.neighbors(u))
            .filter(|&x| x != v && !self.is_adjacent(x, v))
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub(crate) fn ensure_alive(&self, v: VertexId) -> Result<(), GraphError> {
        if self.is_alive(v) {
            Ok(())
        } else {
            Err(GraphError::DeadVertex(v))
        }
    }

    /// Starts (or stops) recording changes so they can be undone with
    /// [`WeightedGraph::rollback`].
    pub fn set_journaling(&mut self, on: bool) {
        self.journal = if on { Some(Vec::new()) } else { None };
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint(self.journal.as_ref().map_or(0, Vec::len))
    }

    /// Undoes every change recorded after `cp`.
    pub fn rollback(&mut self, cp: Checkpoint) {
        let Some(mut journal) = self.journal.take() else {
            return;
        };
        while journal.len() > cp.0 {
            match journal.pop().expect("non-empty") {
                Change::Kill(v) => self.revive(v),
                Change::SetWeight(v, w) => self.weight[v.index()] = w,
                Change::Spawn(v) => self.unspawn(v),
            }
        }
        self.journal = Some(journal);
    }

    fn record(&mut self, change: Change) {
        if let Some(j) = self.journal.as_mut() {
            j.push(change);
        }
    }

    fn kill(&mut self, v: VertexId) {
        debug_assert!(self.is_alive(v));
        self.alive[v.index()] = false;
        self.alive_count -= 1;
        self.edge_count -= self.degree[v.index()] as usize;
        for i in 0..self.adj[v.index()].len() {
            let u = self.adj[v.index()][i];
            if self.alive[u.index()] {
                self.degree[u.index()] -= 1;
            }
        }
        self.record(Change::Kill(v));
    }

    fn revive(&mut self, v: VertexId) {
        self.alive[v.index()] = true;
        self.alive_count += 1;
        self.edge_count += self.degree[v.index()] as usize;
        for i in 0..self.adj[v.index()].len() {
            let u = self.adj[v.index()][i];
            if self.alive[u.index()] {
                self.degree[u.index()] += 1;
            }
        }
    }

    fn set_weight(&mut self, v: VertexId, w: Weight) {
        let old = self.weight[v.index()];
        self.weight[v.index()] = w;
        self.record(Change::SetWeight(v, old));
    }

    // New vertex adjacent to `neighbors` (all alive, ascending). The new id is
    // the largest, so pushing it keeps every neighbour list sorted.
    fn spawn(&mut self, weight: Weight, neighbors: Vec<VertexId>) -> VertexId {
        let v = VertexId::new(self.adj.len());
        for &u in &neighbors {
            self.adj[u.index()].push(v);
            self.degree[u.index()] += 1;
        }
        self.edge_count += neighbors.len();
        self.degree.push(neighbors.len() as u32);
        self.adj.push(neighbors);
        self.weight.push(weight);
        self.alive.push(true);
        self.alive_count += 1;
        self.record(Change::Spawn(v));
        v
    }

    fn unspawn(&mut self, v: VertexId) {
        debug_assert_eq!(v.index() + 1, self.adj.len());
        let neighbors = self.adj.pop().expect("spawned vertex");
        for u in neighbors {
            let popped = self.adj[u.index()].pop();
            debug_assert_eq!(popped, Some(v));
            self.degree[u.index()] -= 1;
            self.edge_count -= 1;
        }
        self.degree.pop();
        self.weight.pop();
        self.alive.pop();
        self.alive_count -= 1;
    }

    /// Commits `v` to the independent set: removes N[v] and adds w(v) to the
    /// trace offset.
    pub fn include_vertex(
        &mut self,
        trace: &mut ReductionTrace,
        v: VertexId,
    ) -> Result<(), GraphError> {
        self.ensure_alive(v)?;
        let removed: Vec<VertexId> = self.neighbors(v).collect();
        for &u in &removed {
            self.kill(u);
        }
        self.kill(v);
        trace.offset += self.weight(v);
        trace.events.push(ReductionEvent::IncludeVertex { vertex: v, removed });
        Ok(())
    }

    /// Deletes `v`; its neighbours stay.
    pub fn exclude_vertex(
        &mut self,
        trace: &mut ReductionTrace,
        v: VertexId,
    ) -> Result<(), GraphError> {
        self.ensure_alive(v)?;
        self.kill(v);
        trace.events.push(ReductionEvent::ExcludeVertex { vertex: v });
        Ok(())
    }

    /// Replaces a pairwise non-adjacent set by one fresh vertex of weight
    /// w(S) adjacent to N(S).
    pub fn contract_set(
        &mut self,
        trace: &mut ReductionTrace,
        set: &[VertexId],
    ) -> Result<VertexId, GraphError> {
        let mut members = set.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.len() < 2 {
            return Err(GraphError::SetTooSmall);
        }
        for &v in &members {
            self.ensure_alive(v)?;
        }
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if self.is_adjacent(u, v) {
                    return Err(GraphError::AdjacentMembers(u, v));
                }
            }
        }
        let weight = self.weight_of(&members);
        let neighbors = self.set_neighborhood(&members);
        for &v in &members {
            self.kill(v);
        }
        let merged = self.spawn(weight, neighbors);
        trace.events.push(ReductionEvent::ContractSet { members, merged });
        Ok(merged)
    }

    /// Weighted pendant fold for a degree-one `v` lighter than its neighbour
    /// `u`: w(u) -= w(v), offset += w(v), `v` is removed. At reconstruction
    /// `u` is kept if chosen, otherwise `v` is taken.
    pub fn fold_pendant(
        &mut self,
        trace: &mut ReductionTrace,
        v: VertexId,
    ) -> Result<VertexId, GraphError> {
        self.ensure_alive(v)?;
        if self.degree(v) != 1 {
            return Err(GraphError::NotPendant(v));
        }
        let u = self.neighbors(v).next().expect("degree one");
        let wv = self.weight(v);
        if wv >= self.weight(u) {
            return Err(GraphError::NotPendant(v));
        }
        self.kill(v);
        let wu = self.weight(u);
        self.set_weight(u, wu - wv);
        trace.offset += wv;
        trace.events.push(ReductionEvent::FoldPendant { pendant: v, anchor: u, weight: wv });
        Ok(u)
    }

    /// Copy of the alive part with dense ids. The second value maps each new
    /// id to the id it had here.
    pub fn compact(&self) -> (WeightedGraph, Vec<VertexId>) {
        let old: Vec<VertexId> = self.vertices().collect();
        let mut new_id = vec![usize::MAX; self.capacity()];
        for (i, v) in old.iter().enumerate() {
            new_id[v.index()] = i;
        }
        let mut edges = Vec::with_capacity(self.edge_count);
        for (i, &v) in old.iter().enumerate() {
            for u in self.neighbors(v) {
                let j = new_id[u.index()];
                if i < j {
                    edges.push((i, j));
                }
            }
        }
        let weights = old.iter().map(|&v| self.weight(v)).collect();
        let g = WeightedGraph::from_edges(old.len(), &edges, weights)
            .expect("alive subgraph of a valid graph is valid");
        (g, old)
    }

    /// Structural self-check used by tests: symmetry, ordering, counters.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut alive = 0;
        let mut twice_edges = 0;
        for (i, list) in self.adj.iter().enumerate() {
            let v = VertexId::new(i);
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("adjacency of {v} not strictly sorted"));
            }
            if list.contains(&v) {
                return Err(format!("self-loop on {v}"));
            }
            if !self.alive[i] {
                continue;
            }
            alive += 1;
            if self.weight[i] <= 0 {
                return Err(format!("alive vertex {v} has weight {}", self.weight[i]));
            }
            let deg = self.neighbors(v).count();
            if deg != self.degree[i] as usize {
                return Err(format!("degree cache of {v}: {} vs {deg}", self.degree[i]));
            }
            twice_edges += deg;
            for u in self.neighbors(v) {
                if self.adj[u.index()].binary_search(&v).is_err() {
                    return Err(format!("edge {v}-{u} not symmetric"));
                }
            }
        }
        if alive != self.alive_count {
            return Err(format!("alive_count {} vs {alive}", self.alive_count));
        }
        if twice_edges / 2 != self.edge_count {
            return Err(format!("edge_count {} vs {}", self.edge_count, twice_edges / 2));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReductionEvent {
    IncludeVertex { vertex: VertexId, removed: Vec<VertexId> },
    ExcludeVertex { vertex: VertexId },
    ContractSet { members: Vec<VertexId>, merged: VertexId },
    FoldPendant { pendant: VertexId, anchor: VertexId, weight: Weight },
}

/// Position in a trace, for truncation on backtrack.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceMark {
    len: usize,
    offset: Weight,
}

/// Ordered log of reduction events plus the weight already committed to the
/// independent set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    events: Vec<ReductionEvent>,
    offset: Weight,
}

impl ReductionTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn offset(&self) -> Weight {
        self.offset
    }

    pub fn events(&self) -> &[ReductionEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn mark(&self) -> TraceMark {
        TraceMark { len: self.events.len(), offset: self.offset }
    }

    pub fn truncate(&mut self, mark: TraceMark) {
        self.events.truncate(mark.len);
        self.offset = mark.offset;
    }

    /// Lifts an independent set of `kernel` (the graph this trace left
    /// behind) to an independent set of the graph the trace started from,
    /// of weight `offset + w(kernel_solution)`.
    pub fn reconstruct(
        &self,
        kernel: &WeightedGraph,
        kernel_solution: &[VertexId],
    ) -> Result<Vec<VertexId>, GraphError> {
        let mut chosen = vec![false; kernel.capacity()];
        for &v in kernel_solution {
            if !kernel.is_alive(v) {
                return Err(GraphError::InvalidKernelSolution(format!(
                    "vertex {v} is not in the kernel"
                )));
            }
            if chosen[v.index()] {
                return Err(GraphError::InvalidKernelSolution(format!("vertex {v} repeated")));
            }
            chosen[v.index()] = true;
        }
        for &v in kernel_solution {
            if let Some(u) = kernel.neighbors(v).find(|u| chosen[u.index()]) {
                return Err(GraphError::InvalidKernelSolution(format!(
                    "vertices {v} and {u} are adjacent"
                )));
            }
        }
        for event in self.events.iter().rev() {
            match event {
                ReductionEvent::IncludeVertex { vertex, .. } => chosen[vertex.index()] = true,
                ReductionEvent::ExcludeVertex { .. } => {}
                ReductionEvent::ContractSet { members, merged } => {
                    if std::mem::take(&mut chosen[merged.index()]) {
                        for m in members {
                            chosen[m.index()] = true;
                        }
                    }
                }
                ReductionEvent::FoldPendant { pendant, anchor, .. } => {
                    if !chosen[anchor.index()] {
                        chosen[pendant.index()] = true;
                    }
                }
            }
        }
        Ok(chosen
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(i, _)| VertexId::new(i))
            .collect())
    }
}
