//! Exact branch-and-reduce.
//!
//! Every search node reduces its graph with the kernelization pipeline, then
//! (when enabled) applies the weight packing constraints collected on the path
//! from the root until they neither prune nor simplify. A greedy solution
//! updates the incumbent, a weighted clique cover bounds the node, and the
//! max-degree vertex v is branched on:
//!
//! - include the confining set S_v, adding `Σ_{N⁺(u)} w(z)·x_z < w(N⁺(u)) − (w(u) − w(v))`
//!   for every heavier neighbour u, where N⁺(u) = N(u) \ N[v];
//! - delete the inferred covering set IC_v, adding `Σ_{N(v)} w(z)·x_z < w(N(v)) − w(v)`.
//!
//! x_z = 1 means z is left out of the independent set. Constraints are scoped
//! to the search path: each branch restores the store it started from.
//!
//! In their strict form these constraints can cut off every optimum when
//! weights tie (both branches insist on a strictly better swap partner). The
//! solver therefore uses them relaxed by one (`≤` instead of `<` over integer
//! weights) unless [`ConstraintMode::Strict`] is requested: a relaxed
//! constraint only states that no strictly improving swap exists, which every
//! maximum weight independent set satisfies.

use std::collections::{BinaryHeap, HashMap};
use std::cmp::Ordering;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::cit::{self, CitBudget, ConfiningOutcome};
use crate::graph::{ReductionEvent, ReductionTrace, VertexId, Weight, WeightedGraph};
use crate::reduce::ReducePipeline;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("vertex {0} has no neighbours; an exclusion constraint would be empty")]
    DegenerateConstraint(VertexId),
}

/// `Σ coeff(z)·x_z < rhs` over exclusion indicators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingConstraint {
    terms: Vec<(VertexId, Weight)>,
    rhs: Weight,
}

impl PackingConstraint {
    pub fn new(mut terms: Vec<(VertexId, Weight)>, rhs: Weight) -> Self {
        terms.sort_unstable();
        PackingConstraint { terms, rhs }
    }

    /// Terms with coefficient w(z) for every z in `set`.
    fn over(g: &WeightedGraph, set: &[VertexId], rhs: Weight) -> Self {
        PackingConstraint::new(set.iter().map(|&z| (z, g.weight(z))).collect(), rhs)
    }

    pub fn terms(&self) -> &[(VertexId, Weight)] {
        &self.terms
    }

    pub fn rhs(&self) -> Weight {
        self.rhs
    }

    pub fn coefficient(&self, v: VertexId) -> Option<Weight> {
        self.terms.binary_search_by_key(&v, |&(z, _)| z).ok().map(|i| self.terms[i].1)
    }

    /// Same constraint with `<` weakened to `≤`.
    pub fn relaxed(mut self) -> Self {
        self.rhs += 1;
        self
    }

    fn members(&self) -> Vec<VertexId> {
        self.terms.iter().map(|&(z, _)| z).collect()
    }

    fn take(&mut self, v: VertexId) -> Option<Weight> {
        let i = self.terms.binary_search_by_key(&v, |&(z, _)| z).ok()?;
        Some(self.terms.remove(i).1)
    }
}

impl fmt::Display for PackingConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, (z, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}·x{z}")?;
        }
        write!(f, " < {}", self.rhs)
    }
}

/// Include-side constraints for `v` (one per neighbour u with
/// w(u) ≥ w(v) and non-empty N(u) \ N[v]). The confining set is accepted for
/// interface symmetry; the constraints only depend on `v`.
pub fn make_include_constraints(
    g: &WeightedGraph,
    v: VertexId,
    _confining: &[VertexId],
) -> Vec<PackingConstraint> {
    let wv = g.weight(v);
    g.neighbors(v)
        .filter(|&u| g.weight(u) >= wv)
        .filter_map(|u| {
            let plus: Vec<VertexId> = g.neighbors(u).filter(|&z| z != v && !g.is_adjacent(z, v)).collect();
            if plus.is_empty() {
                return None;
            }
            let rhs = g.weight_of(&plus) - (g.weight(u) - wv);
            Some(PackingConstraint::over(g, &plus, rhs))
        })
        .collect()
}

/// Exclude-side constraint for `v`: `Σ_{N(v)} w(z)·x_z < w(N(v)) − w(v)`.
pub fn make_exclude_constraint(
    g: &WeightedGraph,
    v: VertexId,
) -> Result<PackingConstraint, SolverError> {
    let around: Vec<VertexId> = g.neighbors(v).collect();
    if around.is_empty() {
        return Err(SolverError::DegenerateConstraint(v));
    }
    Ok(PackingConstraint::over(g, &around, g.weight_of(&around) - g.weight(v)))
}

/// Constraints of one search path, indexed by vertex.
#[derive(Clone, Debug, Default)]
pub struct ConstraintStore {
    slots: Vec<Option<PackingConstraint>>,
    index: HashMap<VertexId, Vec<usize>>,
    live: usize,
}

impl ConstraintStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &PackingConstraint> {
        self.slots.iter().flatten()
    }

    /// Adds a constraint; an empty one is kept only if it is already violated.
    pub fn add(&mut self, c: PackingConstraint) {
        if c.terms.is_empty() && c.rhs > 0 {
            return;
        }
        let id = self.slots.len();
        for &(z, _) in &c.terms {
            self.index.entry(z).or_default().push(id);
        }
        self.slots.push(Some(c));
        self.live += 1;
    }

    fn detach(&mut self, z: VertexId, id: usize) {
        if let Some(list) = self.index.get_mut(&z) {
            list.retain(|&i| i != id);
            if list.is_empty() {
                self.index.remove(&z);
            }
        }
    }

    fn settle(&mut self, id: usize) {
        if let Some(c) = &self.slots[id] {
            if c.terms.is_empty() && c.rhs > 0 {
                self.slots[id] = None;
                self.live -= 1;
            }
        }
    }

    fn drop_term(&mut self, z: VertexId, excluded: bool) {
        for id in self.index.remove(&z).unwrap_or_default() {
            let c = self.slots[id].as_mut().expect("indexed constraint is live");
            let coeff = c.take(z).expect("index is consistent");
            if excluded {
                c.rhs -= coeff;
            }
            self.settle(id);
        }
    }

    /// z joins the independent set (x_z = 0): the term goes, rhs stays.
    pub fn update_on_include(&mut self, z: VertexId) {
        self.drop_term(z, false);
    }

    /// z leaves the graph (x_z = 1): the term goes and rhs drops by its coefficient.
    pub fn update_on_exclude(&mut self, z: VertexId) {
        self.drop_term(z, true);
    }

    fn discard_containing(&mut self, z: VertexId) {
        for id in self.index.get(&z).cloned().unwrap_or_default() {
            let c = self.slots[id].take().expect("indexed constraint is live");
            self.live -= 1;
            for (y, _) in c.terms {
                self.detach(y, id);
            }
        }
    }

    fn merge(&mut self, members: &[VertexId], merged: VertexId) {
        // x_merged = x_m for every member m, so coefficients add up
        let mut touched: Vec<usize> = members
            .iter()
            .flat_map(|m| self.index.remove(m).unwrap_or_default())
            .collect();
        touched.sort_unstable();
        touched.dedup();
        for id in touched {
            let c = self.slots[id].as_mut().expect("indexed constraint is live");
            let sum: Weight = members.iter().filter_map(|&m| c.take(m)).sum();
            c.terms.push((merged, sum));
            c.terms.sort_unstable();
            self.index.entry(merged).or_default().push(id);
        }
    }

    /// Brings the store in line with graph events recorded after it was last synced.
    pub fn apply(&mut self, event: &ReductionEvent) {
        match event {
            ReductionEvent::IncludeVertex { vertex, removed } => {
                self.update_on_include(*vertex);
                for &u in removed {
                    self.update_on_exclude(u);
                }
            }
            ReductionEvent::ExcludeVertex { vertex } => self.update_on_exclude(*vertex),
            ReductionEvent::ContractSet { members, merged } => self.merge(members, *merged),
            // the pendant's indicator becomes 1 - x_anchor; dropping is the simple sound choice
            ReductionEvent::FoldPendant { pendant, .. } => self.discard_containing(*pendant),
        }
    }

    pub fn sync(&mut self, events: &[ReductionEvent]) {
        for e in events {
            self.apply(e);
        }
    }

    /// Test hook: every index entry points at a live constraint holding the term and back.
    pub fn check_index(&self) -> Result<(), String> {
        for (id, c) in self.slots.iter().enumerate() {
            let Some(c) = c else { continue };
            for &(z, _) in &c.terms {
                if !self.index.get(&z).is_some_and(|l| l.contains(&id)) {
                    return Err(format!("term x{z} of constraint {id} not indexed"));
                }
            }
        }
        for (z, ids) in &self.index {
            for &id in ids {
                match &self.slots[id] {
                    Some(c) if c.coefficient(*z).is_some() => {}
                    _ => return Err(format!("stale index entry x{z} -> {id}")),
                }
            }
        }
        if self.iter().count() != self.live {
            return Err("live counter out of date".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintMode {
    /// Constraints exactly as derived; may lose optima on weight ties.
    Strict,
    /// Every derived constraint weakened by one.
    #[default]
    Relaxed,
}

impl ConstraintMode {
    fn shape(self, c: PackingConstraint) -> PackingConstraint {
        match self {
            ConstraintMode::Strict => c,
            ConstraintMode::Relaxed => c.relaxed(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintCheck {
    Pruned,
    Simplified,
    Clean,
}

/// Applies the constraint cases until nothing changes:
/// (a) rhs ≤ 0 prunes; (b) rhs ≤ every coefficient forces all term vertices
/// into the set (pruning if they are dependent) and adds set constraints
/// for heavy neighbours; (c) a vertex whose included would push
/// the left side to rhs is deleted, adding an exclude-side constraint for it.
/// New constraints are created strict.
pub fn check_constraints(
    g: &mut WeightedGraph,
    store: &mut ConstraintStore,
    trace: &mut ReductionTrace,
) -> ConstraintCheck {
    check_constraints_with(g, store, trace, ConstraintMode::Strict)
}

/// [`check_constraints`] with the given shape for newly created constraints.
pub fn check_constraints_with(
    g: &mut WeightedGraph,
    store: &mut ConstraintStore,
    trace: &mut ReductionTrace,
    mode: ConstraintMode,
) -> ConstraintCheck {
    let mut changed = false;
    'scan: loop {
        for id in 0..store.slots.len() {
            let Some(c) = &store.slots[id] else { continue };
            if c.rhs <= 0 {
                return ConstraintCheck::Pruned;
            }
            let set = c.members();
            let min = c.terms.iter().map(|&(_, w)| w).min().expect("non-empty when rhs > 0");
            if c.rhs <= min {
                if !g.is_independent(&set) {
                    return ConstraintCheck::Pruned;
                }
                let extra = set_constraints(g, &set);
                let mark = trace.len();
                for &s in &set {
                    g.include_vertex(trace, s).expect("constraint vertices are alive");
                }
                store.sync(&trace.events()[mark..]);
                for e in extra {
                    store.add(mode.shape(e));
                }
                changed = true;
                continue 'scan;
            }
            if let Some(u) = forced_out(g, c) {
                let extra = make_exclude_constraint(g, u).expect("u has a neighbour in the constraint");
                let mark = trace.len();
                g.exclude_vertex(trace, u).expect("alive");
                store.sync(&trace.events()[mark..]);
                store.add(mode.shape(extra));
                changed = true;
                continue 'scan;
            }
        }
        break;
    }
    if changed {
        ConstraintCheck::Simplified
    } else {
        ConstraintCheck::Clean
    }
}

// For p ∈ N(S) with w(p) ≥ w(N(p) ∩ S) and N⁺(p) = N(p) \ N[S] non-empty.
fn set_constraints(g: &WeightedGraph, set: &[VertexId]) -> Vec<PackingConstraint> {
    g.set_neighborhood(set)
        .into_iter()
        .filter_map(|p| {
            let touching: Weight = set.iter().filter(|&&s| g.is_adjacent(s, p)).map(|&s| g.weight(s)).sum();
            if g.weight(p) < touching {
                return None;
            }
            let plus: Vec<VertexId> = g
                .neighbors(p)
                .filter(|&z| !set.contains(&z) && !set.iter().any(|&s| g.is_adjacent(s, z)))
                .collect();
            if plus.is_empty() {
                return None;
            }
            let rhs = g.weight_of(&plus) - (g.weight(p) - touching);
            Some(PackingConstraint::over(g, &plus, rhs))
        })
        .collect()
}

// Case (c): the smallest u ∈ N(S) \ S whose term neighbours already reach rhs.
fn forced_out(g: &WeightedGraph, c: &PackingConstraint) -> Option<VertexId> {
    let mut reach: HashMap<VertexId, Weight> = HashMap::new();
    for &(z, coeff) in &c.terms {
        for u in g.neighbors(z) {
            if c.coefficient(u).is_none() {
                *reach.entry(u).or_insert(0) += coeff;
            }
        }
    }
    reach.into_iter().filter(|&(_, r)| r >= c.rhs).map(|(u, _)| u).min()
}

/// Greedy independent set: repeatedly takes the vertex maximising
/// w(v)/(d(v)+1) (ties: heavier, then smaller id) and deletes its closed
/// neighbourhood.
pub fn greedy_lower_bound(g: &WeightedGraph) -> (Weight, Vec<VertexId>) {
    #[derive(PartialEq, Eq)]
    struct Key {
        w: Weight,
        d: usize,
        v: VertexId,
    }
    impl Ord for Key {
        fn cmp(&self, o: &Self) -> Ordering {
            let lhs = self.w as i128 * (o.d as i128 + 1);
            let rhs = o.w as i128 * (self.d as i128 + 1);
            lhs.cmp(&rhs).then(self.w.cmp(&o.w)).then(o.v.cmp(&self.v))
        }
    }
    impl PartialOrd for Key {
        fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
            Some(self.cmp(o))
        }
    }

    let cap = g.capacity();
    let mut gone = vec![false; cap];
    let mut deg = vec![0usize; cap];
    let mut heap = BinaryHeap::new();
    for v in g.vertices() {
        deg[v.index()] = g.degree(v);
        heap.push(Key { w: g.weight(v), d: deg[v.index()], v });
    }
    let mut set = Vec::new();
    let mut total = 0;
    while let Some(Key { w, d, v }) = heap.pop() {
        if gone[v.index()] || d != deg[v.index()] {
            continue;
        }
        set.push(v);
        total += w;
        gone[v.index()] = true;
        let closed: Vec<VertexId> = g.neighbors(v).filter(|u| !gone[u.index()]).collect();
        for &u in &closed {
            gone[u.index()] = true;
        }
        for &u in &closed {
            for x in g.neighbors(u) {
                if !gone[x.index()] {
                    deg[x.index()] -= 1;
                    heap.push(Key { w: g.weight(x), d: deg[x.index()], v: x });
                }
            }
        }
    }
    set.sort_unstable();
    (total, set)
}

/// Weight of a greedy clique cover: vertices by descending weight (ties:
/// smaller id) join the first clique they are fully adjacent to. Each clique
/// contributes its heaviest (first) member.
pub fn clique_cover_upper_bound(g: &WeightedGraph) -> Weight {
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.weight(v)), v));
    let mut clique_of = vec![usize::MAX; g.capacity()];
    let mut size: Vec<usize> = Vec::new();
    let mut top: Vec<Weight> = Vec::new();
    let mut hits: Vec<usize> = Vec::new();
    let mut touched: Vec<usize> = Vec::new();
    for v in order {
        for u in g.neighbors(v) {
            let c = clique_of[u.index()];
            if c != usize::MAX {
                if hits[c] == 0 {
                    touched.push(c);
                }
                hits[c] += 1;
            }
        }
        let home = touched.iter().copied().filter(|&c| hits[c] == size[c]).min();
        for &c in &touched {
            hits[c] = 0;
        }
        touched.clear();
        let c = home.unwrap_or_else(|| {
            size.push(0);
            top.push(g.weight(v));
            hits.push(0);
            size.len() - 1
        });
        clique_of[v.index()] = c;
        size[c] += 1;
    }
    top.iter().sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branching {
    /// Include the confining set / delete the inferred covering set.
    Confining,
    /// Include v / delete v.
    Plain,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub constraints: bool,
    pub constraint_mode: ConstraintMode,
    pub branching: Branching,
    pub time_limit: Option<Duration>,
    pub pipeline: ReducePipeline,
    pub budget: CitBudget,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            constraints: true,
            constraint_mode: ConstraintMode::Relaxed,
            branching: Branching::Confining,
            time_limit: None,
            pipeline: ReducePipeline::default(),
            budget: CitBudget::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SolverReport {
    pub best_weight: Weight,
    pub solution: Vec<VertexId>,
    pub optimal: bool,
    pub nodes: u64,
    pub prunes_bound: u64,
    pub prunes_constraint: u64,
    pub simplifications: u64,
    pub elapsed_secs: f64,
}

struct Search<'a> {
    cfg: &'a SolverConfig,
    g: WeightedGraph,
    trace: ReductionTrace,
    store: ConstraintStore,
    deadline: Option<Instant>,
    timed_out: bool,
    report: SolverReport,
}

impl Search<'_> {
    fn out_of_time(&mut self) -> bool {
        if !self.timed_out && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn reduce(&mut self) -> bool {
        loop {
            let mark = self.trace.len();
            self.cfg.pipeline.run(&mut self.g, &mut self.trace);
            if !self.cfg.constraints {
                return true;
            }
            self.store.sync(&self.trace.events()[mark..]);
            match check_constraints_with(&mut self.g, &mut self.store, &mut self.trace, self.cfg.constraint_mode) {
                ConstraintCheck::Pruned => {
                    self.report.prunes_constraint += 1;
                    return false;
                }
                ConstraintCheck::Simplified => self.report.simplifications += 1,
                ConstraintCheck::Clean => return true,
            }
        }
    }

    fn node(&mut self) {
        self.report.nodes += 1;
        if self.out_of_time() || !self.reduce() {
            return;
        }
        let c = self.trace.offset();
        let (gw, gs) = greedy_lower_bound(&self.g);
        if c + gw > self.report.best_weight {
            self.report.best_weight = c + gw;
            self.report.solution = self.trace.reconstruct(&self.g, &gs).expect("greedy set is independent");
        }
        if self.g.is_empty() {
            return;
        }
        if c + clique_cover_upper_bound(&self.g) <= self.report.best_weight {
            self.report.prunes_bound += 1;
            return;
        }
        let v = self
            .g
            .vertices()
            .max_by_key(|&v| (self.g.degree(v), self.g.weight(v), std::cmp::Reverse(v)))
            .expect("non-empty");
        let (take, drop) = match self.cfg.branching {
            Branching::Plain => (Some(vec![v]), vec![v]),
            Branching::Confining => match cit::compute_confining(&self.g, v, &self.cfg.budget).expect("alive") {
                ConfiningOutcome::Unconfined => (None, vec![v]),
                ConfiningOutcome::Confined(s) => {
                    let ic = cit::inferred_covering(&self.g, v, &self.cfg.budget).expect("alive");
                    (Some(s), ic)
                }
            },
        };
        if let Some(take) = take {
            let extra = if self.cfg.constraints { make_include_constraints(&self.g, v, &take) } else { vec![] };
            self.branch(extra, &take, true);
        }
        let extra = if self.cfg.constraints { make_exclude_constraint(&self.g, v).ok().into_iter().collect() } else { vec![] };
        self.branch(extra, &drop, false);
    }

    fn branch(&mut self, extra: Vec<PackingConstraint>, set: &[VertexId], include: bool) {
        if self.timed_out {
            return;
        }
        let cp = self.g.checkpoint();
        let mark = self.trace.mark();
        let saved = self.cfg.constraints.then(|| self.store.clone());
        for c in extra {
            self.store.add(self.cfg.constraint_mode.shape(c));
        }
        let start = self.trace.len();
        for &x in set {
            if include {
                self.g.include_vertex(&mut self.trace, x).expect("confining sets are independent");
            } else {
                self.g.exclude_vertex(&mut self.trace, x).expect("alive");
            }
        }
        if self.cfg.constraints {
            self.store.sync(&self.trace.events()[start..]);
        }
        self.node();
        self.g.rollback(cp);
        self.trace.truncate(mark);
        if let Some(s) = saved {
            self.store = s;
        }
    }
}

/// Solves MWIS on `g` exactly (or best effort within the time limit).
pub fn solve(g: &WeightedGraph, cfg: &SolverConfig) -> SolverReport {
    // deep searches recurse once per branching level
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(256 << 20)
            .spawn_scoped(s, || solve_here(g, cfg))
            .expect("spawn solver thread")
            .join()
            .expect("solver thread panicked")
    })
}

fn solve_here(g: &WeightedGraph, cfg: &SolverConfig) -> SolverReport {
    let start = Instant::now();
    let mut work = g.clone();
    work.set_journaling(true);
    let mut search = Search {
        cfg,
        g: work,
        trace: ReductionTrace::new(),
        store: ConstraintStore::new(),
        deadline: cfg.time_limit.map(|t| start + t),
        timed_out: false,
        report: SolverReport::default(),
    };
    search.node();
    let mut report = search.report;
    report.optimal = !search.timed_out;
    report.solution.sort_unstable();
    report.elapsed_secs = start.elapsed().as_secs_f64();
    log::debug!(
        "solve: weight {} optimal {} nodes {} ({:.3}s)",
        report.best_weight,
        report.optimal,
        report.nodes,
        report.elapsed_secs
    );
    report
}
