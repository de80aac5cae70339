//! Minimum weight vertex cover local search.
//!
//! Each iteration removes a few cover vertices, re-covers greedily, drops
//! redundant vertices and keeps the best cover seen:
//!
//! 1. remove the vertex of minimum `loss`;
//! 2. if some cover vertex has negative `valid_score`, remove the one with
//!    the smallest score together with the cover members of its inferred
//!    confining set (when CIT is on); otherwise remove the next minimum-loss
//!    vertex;
//! 3. if the removed vertices have total degree below twice the average
//!    degree, remove the best of `t` uniformly sampled cover vertices (BMS).
//!
//! Scores, for a cover vertex v:
//! - `loss(v)` = (edges covered only by v) / w(v)
//! - `valid_score(v)` = w(uncovered neighbours) − w(v); negative means that
//!   swapping v for its uncovered neighbours lowers the cover weight.

use std::cmp::Ordering;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cit::{self, CitBudget};
use crate::graph::{VertexId, Weight, WeightedGraph};
use crate::reduce::{reduce_with, ReducePipeline};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("vertex {0} is not in the cover")]
    NotInCover(VertexId),
    #[error("the cover is empty")]
    EmptyCover,
    #[error("the given set leaves edges uncovered")]
    NotACover,
    #[error("expected a cutoff like `5`, `0.5` or `iters:N`, got `{0}`")]
    BadCutoff(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cutoff {
    Time(Duration),
    Iterations(u64),
}

/// `<secs>` (fractional allowed) or `iters:<N>`.
impl FromStr for Cutoff {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SearchError::BadCutoff(s.to_string());
        if let Some(k) = s.strip_prefix("iters:") {
            return k.trim().parse().map(Cutoff::Iterations).map_err(|_| bad());
        }
        let secs: f64 = s.trim().parse().map_err(|_| bad())?;
        Duration::try_from_secs_f64(secs).map(Cutoff::Time).map_err(|_| bad())
    }
}

/// Default for [`SearchConfig::stagnation`].
pub const STAGNATION: u64 = 100;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub cutoff: Cutoff,
    pub seed: u64,
    /// Remove inferred confining sets along with valid_score picks.
    pub cit: bool,
    /// Stop as soon as the best cover weighs at most this much.
    pub target: Option<Weight>,
    /// BMS sample size.
    pub samples: usize,
    /// After this many iterations without a new best cover, the first
    /// removal of each step picks a uniformly random cover vertex instead of
    /// the min-loss one, until the best improves again. `None` disables it.
    pub stagnation: Option<u64>,
    pub budget: CitBudget,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cutoff: Cutoff::Time(Duration::from_secs(5)),
            seed: 1,
            cit: true,
            target: None,
            samples: 50,
            stagnation: Some(STAGNATION),
            budget: CitBudget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    /// Best cover, in the ids of the searched graph.
    pub cover: Vec<VertexId>,
    pub cover_weight: Weight,
    /// Alive vertices outside the cover.
    pub independent_set: Vec<VertexId>,
    pub independent_weight: Weight,
    pub iterations: u64,
    pub cit_bulk_removals: u64,
    pub elapsed_secs: f64,
    pub seed: u64,
}

// a/wa < b/wb without division
fn ratio_cmp(a: usize, wa: Weight, b: usize, wb: Weight) -> Ordering {
    (a as i128 * wb as i128).cmp(&(b as i128 * wa as i128))
}

/// Search state over a dense copy of the graph (positions `0..n`).
pub struct SearchState {
    ids: Vec<VertexId>,
    graph: WeightedGraph,
    w: Vec<Weight>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    edge_degree_sum: usize,
    in_cover: Vec<bool>,
    cover_weight: Weight,
    // neighbours outside the cover: count and weight
    out_deg: Vec<usize>,
    out_w: Vec<Weight>,
    uncovered: Vec<usize>,
    slot: Vec<usize>,
    best: Vec<bool>,
    best_weight: Weight,
    inferred: Vec<Option<Vec<usize>>>,
    rng: ChaCha8Rng,
    cfg: SearchConfig,
    iterations: u64,
    bulk: u64,
    last_improvement: u64,
}

const NONE: usize = usize::MAX;

impl SearchState {
    /// Builds the state and an initial cover with [`construct_cover`].
    pub fn new(g: &WeightedGraph, cfg: SearchConfig) -> Self {
        let mut st = SearchState::empty(g, cfg);
        for v in construct_positions(&st) {
            st.add(v);
        }
        st.drop_redundant((0..st.w.len()).collect());
        st.record_best();
        st
    }

    /// Starts from the given cover (ids of `g`), which must cover every edge.
    pub fn with_cover(
        g: &WeightedGraph,
        cover: &[VertexId],
        cfg: SearchConfig,
    ) -> Result<Self, SearchError> {
        let mut st = SearchState::empty(g, cfg);
        for &v in cover {
            match st.ids.binary_search(&v) {
                Ok(p) if !st.in_cover[p] => st.add(p),
                _ => return Err(SearchError::NotInCover(v)),
            }
        }
        if !st.uncovered.is_empty() {
            return Err(SearchError::NotACover);
        }
        st.record_best();
        Ok(st)
    }

    fn empty(g: &WeightedGraph, cfg: SearchConfig) -> Self {
        let (graph, ids) = g.compact();
        let n = ids.len();
        let w: Vec<Weight> = graph.vertices().map(|v| graph.weight(v)).collect();
        let adj: Vec<Vec<usize>> =
            graph.vertices().map(|v| graph.neighbors(v).map(|u| u.index()).collect()).collect();
        let mut edges = Vec::new();
        for (v, list) in adj.iter().enumerate() {
            edges.extend(list.iter().filter(|&&u| u > v).map(|&u| (v, u)));
        }
        let mut st = SearchState {
            ids,
            w,
            edge_degree_sum: 2 * edges.len(),
            out_deg: adj.iter().map(Vec::len).collect(),
            out_w: vec![0; n],
            slot: vec![NONE; edges.len()],
            uncovered: Vec::new(),
            edges,
            adj,
            in_cover: vec![false; n],
            cover_weight: 0,
            best: vec![false; n],
            best_weight: 0,
            inferred: vec![None; n],
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            graph,
            cfg,
            iterations: 0,
            bulk: 0,
            last_improvement: 0,
        };
        for v in 0..n {
            st.out_w[v] = st.adj[v].iter().map(|&u| st.w[u]).sum();
        }
        for e in 0..st.edges.len() {
            st.mark_uncovered(e);
        }
        st
    }

    fn mark_uncovered(&mut self, e: usize) {
        if self.slot[e] == NONE {
            self.slot[e] = self.uncovered.len();
            self.uncovered.push(e);
        }
    }

    fn mark_covered(&mut self, e: usize) {
        let s = self.slot[e];
        if s != NONE {
            let last = *self.uncovered.last().expect("non-empty");
            self.uncovered.swap_remove(s);
            if last != e {
                self.slot[last] = s;
            }
            self.slot[e] = NONE;
        }
    }

    fn edge_id(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let start = self.edges.partition_point(|&(x, _)| x < a);
        start + self.edges[start..].partition_point(|&(x, y)| x == a && y < b)
    }

    fn add(&mut self, v: usize) {
        debug_assert!(!self.in_cover[v]);
        self.in_cover[v] = true;
        self.cover_weight += self.w[v];
        for i in 0..self.adj[v].len() {
            let u = self.adj[v][i];
            self.out_deg[u] -= 1;
            self.out_w[u] -= self.w[v];
            if !self.in_cover[u] {
                let e = self.edge_id(v, u);
                self.mark_covered(e);
            }
        }
    }

    fn remove(&mut self, v: usize) {
        debug_assert!(self.in_cover[v]);
        self.in_cover[v] = false;
        self.cover_weight -= self.w[v];
        for i in 0..self.adj[v].len() {
            let u = self.adj[v][i];
            self.out_deg[u] += 1;
            self.out_w[u] += self.w[v];
            if !self.in_cover[u] {
                let e = self.edge_id(v, u);
                self.mark_uncovered(e);
            }
        }
    }

    fn pos(&self, v: VertexId) -> Result<usize, SearchError> {
        match self.ids.binary_search(&v) {
            Ok(p) if self.in_cover[p] => Ok(p),
            _ => Err(SearchError::NotInCover(v)),
        }
    }

    /// Edges covered only by `v`, divided by w(v).
    pub fn loss(&self, v: VertexId) -> Result<Ratio<i64>, SearchError> {
        let p = self.pos(v)?;
        Ok(Ratio::new(self.out_deg[p] as i64, self.w[p]))
    }

    /// w(uncovered neighbours) − w(v).
    pub fn valid_score(&self, v: VertexId) -> Result<Weight, SearchError> {
        let p = self.pos(v)?;
        Ok(self.out_w[p] - self.w[p])
    }

    // loss order: smaller ratio, then heavier, then smaller position
    fn loss_cmp(&self, a: usize, b: usize) -> Ordering {
        ratio_cmp(self.out_deg[a], self.w[a], self.out_deg[b], self.w[b])
            .then(self.w[b].cmp(&self.w[a]))
            .then(a.cmp(&b))
    }

    fn min_loss(&self) -> Option<usize> {
        (0..self.w.len()).filter(|&v| self.in_cover[v]).min_by(|&a, &b| self.loss_cmp(a, b))
    }

    fn min_valid(&self) -> Option<usize> {
        (0..self.w.len())
            .filter(|&v| self.in_cover[v])
            .min_by_key(|&v| (self.out_w[v] - self.w[v], std::cmp::Reverse(self.w[v]), v))
    }

    fn inferred_of(&mut self, v: usize) -> Vec<usize> {
        if self.inferred[v].is_none() {
            let set = cit::inferred_confining(&self.graph, VertexId::new(v), &self.cfg.budget)
                .expect("dense graph vertex is alive");
            self.inferred[v] = Some(set.into_iter().map(VertexId::index).collect());
        }
        self.inferred[v].clone().expect("just filled")
    }

    /// Removing phase; returns the removed vertices in removal order. The
    /// cover is left partial until the next add phase.
    pub fn remove_vertices(&mut self) -> Result<Vec<VertexId>, SearchError> {
        Ok(self.remove_phase()?.into_iter().map(|p| self.ids[p]).collect())
    }

    fn stagnating(&self) -> bool {
        self.cfg.stagnation.is_some_and(|k| self.iterations - self.last_improvement >= k)
    }

    fn remove_phase(&mut self) -> Result<Vec<usize>, SearchError> {
        let mut first = self.min_loss().ok_or(SearchError::EmptyCover)?;
        if self.stagnating() {
            let members: Vec<usize> = (0..self.w.len()).filter(|&v| self.in_cover[v]).collect();
            first = members[self.rng.gen_range(0..members.len())];
        }
        self.remove(first);
        let mut removed = vec![first];
        if let Some(v) = self.min_valid() {
            if self.out_w[v] - self.w[v] < 0 {
                self.remove(v);
                removed.push(v);
                if self.cfg.cit {
                    let extra: Vec<usize> =
                        self.inferred_of(v).into_iter().filter(|&u| self.in_cover[u]).collect();
                    if !extra.is_empty() {
                        self.bulk += 1;
                    }
                    for u in extra {
                        self.remove(u);
                        removed.push(u);
                    }
                }
            } else if let Some(u) = self.min_loss() {
                self.remove(u);
                removed.push(u);
            }
        }
        let degree_sum: usize = removed.iter().map(|&v| self.adj[v].len()).sum();
        let n = self.w.len().max(1);
        // Σ d < 2 · (2m / n)
        if degree_sum * n < 2 * self.edge_degree_sum {
            let members: Vec<usize> = (0..self.w.len()).filter(|&v| self.in_cover[v]).collect();
            if !members.is_empty() {
                let samples: Vec<usize> = (0..self.cfg.samples.max(1))
                    .map(|_| members[self.rng.gen_range(0..members.len())])
                    .collect();
                let pick = samples
                    .into_iter()
                    .min_by(|&a, &b| self.loss_cmp(a, b))
                    .expect("at least one sample");
                self.remove(pick);
                removed.push(pick);
            }
        }
        Ok(removed)
    }

    fn add_phase(&mut self, removed: &[usize]) -> Vec<usize> {
        let mut in_r = vec![false; self.w.len()];
        for &v in removed {
            in_r[v] = true;
        }
        let mut added = Vec::new();
        let mut cands: Vec<usize> = Vec::new();
        while !self.uncovered.is_empty() {
            cands.clear();
            for &e in &self.uncovered {
                let (a, b) = self.edges[e];
                match (in_r[a], in_r[b]) {
                    (true, true) => cands.extend([a, b]),
                    (false, false) => cands.extend([a, b]),
                    (true, false) => cands.push(b),
                    (false, true) => cands.push(a),
                }
            }
            cands.sort_unstable();
            cands.dedup();
            let best = *cands
                .iter()
                .max_by(|&&a, &&b| ratio_cmp(self.out_deg[a], self.w[a], self.out_deg[b], self.w[b]))
                .expect("an uncovered edge has endpoints");
            let ties: Vec<usize> = cands
                .iter()
                .copied()
                .filter(|&c| ratio_cmp(self.out_deg[c], self.w[c], self.out_deg[best], self.w[best]).is_eq())
                .collect();
            let v = ties[self.rng.gen_range(0..ties.len())];
            self.add(v);
            added.push(v);
        }
        added
    }

    // Removes redundant cover vertices among `around`, heaviest first.
    fn drop_redundant(&mut self, mut around: Vec<usize>) {
        around.sort_unstable_by_key(|&v| (std::cmp::Reverse(self.w[v]), v));
        around.dedup();
        for v in around {
            if self.in_cover[v] && self.out_deg[v] == 0 {
                self.remove(v);
            }
        }
    }

    fn record_best(&mut self) {
        if self.uncovered.is_empty() && (self.iterations == 0 || self.cover_weight < self.best_weight) {
            self.best.copy_from_slice(&self.in_cover);
            self.best_weight = self.cover_weight;
            self.last_improvement = self.iterations;
        }
    }

    /// One remove / re-cover / clean-up round. Returns false when there is
    /// nothing to do (edgeless graph).
    pub fn step(&mut self) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let Ok(removed) = self.remove_phase() else {
            return false;
        };
        let added = self.add_phase(&removed);
        let mut around = Vec::new();
        for &v in &added {
            around.push(v);
            around.extend(self.adj[v].iter().copied());
        }
        self.drop_redundant(around);
        self.iterations += 1;
        self.record_best();
        true
    }

    /// Removal phases that took extra inferred members along.
    pub fn bulk_removals(&self) -> u64 {
        self.bulk
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn cover_weight(&self) -> Weight {
        self.cover_weight
    }

    pub fn best_weight(&self) -> Weight {
        self.best_weight
    }

    pub fn cover(&self) -> Vec<VertexId> {
        self.collect(&self.in_cover, true)
    }

    pub fn best_cover(&self) -> Vec<VertexId> {
        self.collect(&self.best, true)
    }

    fn collect(&self, flags: &[bool], want: bool) -> Vec<VertexId> {
        (0..flags.len()).filter(|&v| flags[v] == want).map(|v| self.ids[v]).collect()
    }

    /// Whether the current cover touches every edge (checked from scratch).
    pub fn is_valid_cover(&self) -> bool {
        self.uncovered.is_empty() && self.edges.iter().all(|&(a, b)| self.in_cover[a] || self.in_cover[b])
    }

    fn report(&self, elapsed: Duration) -> SearchReport {
        let total: Weight = self.w.iter().sum();
        SearchReport {
            cover: self.best_cover(),
            cover_weight: self.best_weight,
            independent_set: self.collect(&self.best, false),
            independent_weight: total - self.best_weight,
            iterations: self.iterations,
            cit_bulk_removals: self.bulk,
            elapsed_secs: elapsed.as_secs_f64(),
            seed: self.cfg.seed,
        }
    }
}

// Greedy cover: repeatedly the vertex covering most uncovered edges per unit
// weight (ties: smaller id). Lazy max-heap; keys only ever decrease.
fn construct_positions(st: &SearchState) -> Vec<usize> {
    use std::collections::BinaryHeap;

    #[derive(PartialEq, Eq)]
    struct Key {
        gain: usize,
        w: Weight,
        v: usize,
    }
    impl Ord for Key {
        fn cmp(&self, o: &Self) -> Ordering {
            ratio_cmp(self.gain, self.w, o.gain, o.w).then(o.v.cmp(&self.v))
        }
    }
    impl PartialOrd for Key {
        fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
            Some(self.cmp(o))
        }
    }

    let n = st.w.len();
    let mut gain: Vec<usize> = st.adj.iter().map(Vec::len).collect();
    let mut taken = vec![false; n];
    let mut heap: BinaryHeap<Key> =
        (0..n).filter(|&v| gain[v] > 0).map(|v| Key { gain: gain[v], w: st.w[v], v }).collect();
    let mut out = Vec::new();
    while let Some(Key { gain: g, v, .. }) = heap.pop() {
        if taken[v] || g == 0 {
            continue;
        }
        if g != gain[v] {
            if gain[v] > 0 {
                heap.push(Key { gain: gain[v], w: st.w[v], v });
            }
            continue;
        }
        taken[v] = true;
        out.push(v);
        for &u in &st.adj[v] {
            if !taken[u] {
                gain[u] -= 1;
            }
        }
    }
    out
}

/// Greedy initial cover followed by redundancy removal (heaviest first).
pub fn construct_cover(g: &WeightedGraph) -> Vec<VertexId> {
    let cfg = SearchConfig { cutoff: Cutoff::Iterations(0), ..SearchConfig::default() };
    SearchState::new(g, cfg).cover()
}

/// Runs the local search until the cutoff (or the target) and reports the
/// best cover found.
pub fn causal_search(g: &WeightedGraph, cfg: &SearchConfig) -> SearchReport {
    let start = Instant::now();
    let mut st = SearchState::new(g, cfg.clone());
    let done = |st: &SearchState| {
        cfg.target.is_some_and(|t| st.best_weight <= t)
            || match cfg.cutoff {
                Cutoff::Iterations(k) => st.iterations >= k,
                Cutoff::Time(t) => start.elapsed() >= t,
            }
    };
    while !done(&st) && st.step() {}
    let report = st.report(start.elapsed());
    log::debug!(
        "search: cover weight {} after {} iterations ({} bulk removals)",
        report.cover_weight,
        report.iterations,
        report.cit_bulk_removals
    );
    report
}

/// Kernelizes `g` first, searches the kernel, and lifts the best cover back
/// through the reduction trace. Ids in the report refer to `g`; `target`
/// is interpreted as a cover weight of `g`.
pub fn causal_search_reduced(
    g: &WeightedGraph,
    cfg: &SearchConfig,
    pipeline: &ReducePipeline,
) -> SearchReport {
    let start = Instant::now();
    let k = reduce_with(g, pipeline);
    let total: Weight = g.vertices().map(|v| g.weight(v)).sum();
    let kernel_total: Weight = k.kernel.vertices().map(|v| k.kernel.weight(v)).sum();
    // cover(g) = cover(kernel) + (total - offset - kernel_total)
    let shift = total - k.offset - kernel_total;
    let kcfg = SearchConfig { target: cfg.target.map(|t| t - shift), ..cfg.clone() };
    let inner = causal_search(&k.kernel, &kcfg);
    let independent_set = k
        .trace
        .reconstruct(&k.kernel, &inner.independent_set)
        .expect("complement of a vertex cover is independent");
    let mut chosen = vec![false; g.capacity()];
    for v in &independent_set {
        chosen[v.index()] = true;
    }
    let independent_weight = g.weight_of(&independent_set);
    SearchReport {
        cover: g.vertices().filter(|v| !chosen[v.index()]).collect(),
        cover_weight: total - independent_weight,
        independent_set,
        independent_weight,
        elapsed_secs: start.elapsed().as_secs_f64(),
        ..inner
    }
}
