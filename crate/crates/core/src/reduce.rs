//! Kernelization pipeline.
//!
//! Steps run in a fixed order; whenever a step changes the graph the pipeline
//! goes back to the first step. A step stops at the first vertex it changes,
//! so a later step only ever runs when every earlier one is inapplicable.
//!
//! Basic rules:
//! - `isolated`: a degree-0 vertex is taken
//! - `neighborhood`: v with w(v) ≥ w(N(v)) is taken
//! - `pendant`: a degree-1 vertex lighter than its neighbour is folded into it
//! - `domination`: adjacent u, v with N[v] ⊆ N[u] and w(u) ≤ w(v) — u is deleted
//!
//! Conflict rules:
//! - `confining`: unconfined vertices are deleted, confining simultaneous pairs contracted
//! - `covering`: uncovered vertices are taken, covering simultaneous pairs contracted

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::cit::{self, CitBudget, ConfiningOutcome, CoveringOutcome};
use crate::graph::{ReductionTrace, VertexId, Weight, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Isolated,
    Neighborhood,
    Pendant,
    Domination,
    Confining,
    Covering,
}

impl Step {
    pub const ALL: [Step; 6] = [
        Step::Isolated,
        Step::Neighborhood,
        Step::Pendant,
        Step::Domination,
        Step::Confining,
        Step::Covering,
    ];
    pub const BASIC: [Step; 4] = [Step::Isolated, Step::Neighborhood, Step::Pendant, Step::Domination];

    pub fn name(self) -> &'static str {
        match self {
            Step::Isolated => "isolated",
            Step::Neighborhood => "neighborhood",
            Step::Pendant => "pendant",
            Step::Domination => "domination",
            Step::Confining => "confining",
            Step::Covering => "covering",
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown reduction step `{0}` (expected one of isolated, neighborhood, pendant, domination, confining, covering)")]
pub struct UnknownStep(pub String);

impl FromStr for Step {
    type Err = UnknownStep;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Step::ALL
            .into_iter()
            .find(|step| step.name() == s)
            .ok_or_else(|| UnknownStep(s.to_string()))
    }
}

/// Per-rule counters. `removed` is the net drop in alive vertices caused by
/// the rule (neighbourhoods of taken vertices included), `included` counts
/// vertices committed to the independent set, `contracted` the vertices
/// merged away by contractions and folds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RuleStats {
    pub removed: usize,
    pub included: usize,
    pub contracted: usize,
    pub millis: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReduceStats {
    pub per_rule: BTreeMap<&'static str, RuleStats>,
    pub total_millis: f64,
}

#[derive(Clone, Debug)]
pub struct ReducePipeline {
    steps: Vec<Step>,
    budget: CitBudget,
}

impl Default for ReducePipeline {
    fn default() -> Self {
        ReducePipeline::new(Step::ALL.to_vec(), CitBudget::default())
    }
}

impl ReducePipeline {
    /// Steps are sorted into the canonical order and deduplicated.
    pub fn new(mut steps: Vec<Step>, budget: CitBudget) -> Self {
        steps.sort_unstable();
        steps.dedup();
        ReducePipeline { steps, budget }
    }

    pub fn basic() -> Self {
        ReducePipeline::new(Step::BASIC.to_vec(), CitBudget::default())
    }

    pub fn without(mut self, disabled: &[Step]) -> Self {
        self.steps.retain(|s| !disabled.contains(s));
        self
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn budget(&self) -> &CitBudget {
        &self.budget
    }

    /// Reduces `g` in place to a fixed point of all enabled steps.
    pub fn run(&self, g: &mut WeightedGraph, trace: &mut ReductionTrace) -> ReduceStats {
        let start = Instant::now();
        let mut stats = ReduceStats::default();
        for &s in &self.steps {
            stats.per_rule.insert(s.name(), RuleStats::default());
        }
        'restart: loop {
            for &step in &self.steps {
                let t = Instant::now();
                let before = (g.alive_count(), trace.len());
                let outcome = apply_step(step, g, trace, &self.budget);
                let entry = stats.per_rule.get_mut(step.name()).expect("registered");
                entry.millis += t.elapsed().as_secs_f64() * 1e3;
                if let Some(change) = outcome {
                    entry.removed += before.0.saturating_sub(g.alive_count());
                    entry.included += change.included;
                    entry.contracted += change.contracted;
                    debug_assert!(trace.len() > before.1);
                    continue 'restart;
                }
            }
            break;
        }
        stats.total_millis = start.elapsed().as_secs_f64() * 1e3;
        stats
    }
}

struct Change {
    included: usize,
    contracted: usize,
}

const INCLUDED: Change = Change { included: 1, contracted: 0 };
const DELETED: Change = Change { included: 0, contracted: 0 };

// Contracting k vertices removes k and adds one: net k - 1.
fn merged(k: usize) -> Change {
    Change { included: 0, contracted: k - 1 }
}

/// One application of `step`: scans alive vertices in ascending id order and
/// stops after the first vertex that changed the graph.
fn apply_step(
    step: Step,
    g: &mut WeightedGraph,
    trace: &mut ReductionTrace,
    budget: &CitBudget,
) -> Option<Change> {
    let order: Vec<VertexId> = g.vertices().collect();
    for v in order {
        if !g.is_alive(v) {
            continue;
        }
        if let Some(change) = apply_at(step, g, trace, budget, v) {
            return Some(change);
        }
    }
    None
}

fn apply_at(
    step: Step,
    g: &mut WeightedGraph,
    trace: &mut ReductionTrace,
    budget: &CitBudget,
    v: VertexId,
) -> Option<Change> {
    const ALIVE: &str = "scanned vertex is alive";
    match step {
        Step::Isolated => {
            if g.degree(v) == 0 {
                g.include_vertex(trace, v).expect(ALIVE);
                return Some(INCLUDED);
            }
        }
        Step::Neighborhood => {
            let around: Weight = g.neighbors(v).map(|u| g.weight(u)).sum();
            if g.weight(v) >= around {
                g.include_vertex(trace, v).expect(ALIVE);
                return Some(INCLUDED);
            }
        }
        Step::Pendant => {
            if g.degree(v) == 1 {
                let u = g.neighbors(v).next().expect("degree one");
                if g.weight(v) >= g.weight(u) {
                    g.include_vertex(trace, v).expect(ALIVE);
                    return Some(INCLUDED);
                }
                g.fold_pendant(trace, v).expect("checked pendant");
                return Some(Change { included: 0, contracted: 1 });
            }
        }
        Step::Domination => {
            if let Some(u) = dominated_neighbor(g, v) {
                g.exclude_vertex(trace, u).expect(ALIVE);
                return Some(DELETED);
            }
        }
        Step::Confining => match cit::compute_confining(g, v, budget).expect(ALIVE) {
            ConfiningOutcome::Unconfined => {
                g.exclude_vertex(trace, v).expect(ALIVE);
                return Some(DELETED);
            }
            ConfiningOutcome::Confined(set) if set.len() > 1 => {
                if let Some(u) = cit::confining_partner(g, v, &set, budget).expect(ALIVE) {
                    g.contract_set(trace, &[v, u]).expect("confining pairs are independent");
                    return Some(merged(2));
                }
            }
            ConfiningOutcome::Confined(_) => {}
        },
        Step::Covering => match cit::compute_covering(g, v, budget).expect(ALIVE) {
            CoveringOutcome::Uncovered => {
                g.include_vertex(trace, v).expect(ALIVE);
                return Some(INCLUDED);
            }
            CoveringOutcome::Covered(set) if set.len() > 1 => {
                if let Some(u) = cit::covering_partner(g, v, &set, budget).expect(ALIVE) {
                    g.contract_set(trace, &[v, u]).expect("partner is non-adjacent");
                    return Some(merged(2));
                }
            }
            CoveringOutcome::Covered(_) => {}
        },
    }
    None
}

/// A neighbour u of v with w(u) ≤ w(v) and N[v] ⊆ N[u], smallest id first.
fn dominated_neighbor(g: &WeightedGraph, v: VertexId) -> Option<VertexId> {
    let wv = g.weight(v);
    let dv = g.degree(v);
    g.neighbors(v).find(|&u| {
        g.weight(u) <= wv
            && g.degree(u) >= dv
            && g.neighbors(v).all(|x| x == u || g.is_adjacent(u, x))
    })
}

/// Kernel of a graph together with everything needed to lift solutions back.
#[derive(Clone, Debug)]
pub struct KernelResult {
    /// The reduced graph; it shares the id space of the input (contractions
    /// append ids), so use [`WeightedGraph::compact`] for a dense copy.
    pub kernel: WeightedGraph,
    pub offset: Weight,
    pub trace: ReductionTrace,
    pub stats: ReduceStats,
}

/// Stats record as written by `mwis reduce --stats`.
#[derive(Clone, Debug, Serialize)]
pub struct ReduceSummary {
    pub n: usize,
    pub m: usize,
    pub kernel_n: usize,
    pub kernel_m: usize,
    pub offset: Weight,
    pub ratio_percent: f64,
    pub per_rule: BTreeMap<&'static str, RuleStats>,
    pub total_millis: f64,
}

impl KernelResult {
    pub fn summary(&self, original: &WeightedGraph) -> ReduceSummary {
        let n = original.alive_count();
        ReduceSummary {
            n,
            m: original.edge_count(),
            kernel_n: self.kernel.alive_count(),
            kernel_m: self.kernel.edge_count(),
            offset: self.offset,
            ratio_percent: if n == 0 { 0.0 } else { self.kernel.alive_count() as f64 / n as f64 * 100.0 },
            per_rule: self.stats.per_rule.clone(),
            total_millis: self.stats.total_millis,
        }
    }
}

/// Full pipeline on a copy of `g`.
pub fn causal_reduce(g: &WeightedGraph) -> KernelResult {
    reduce_with(g, &ReducePipeline::default())
}

pub fn reduce_with(g: &WeightedGraph, pipeline: &ReducePipeline) -> KernelResult {
    let mut kernel = g.clone();
    kernel.set_journaling(false);
    let mut trace = ReductionTrace::new();
    let stats = pipeline.run(&mut kernel, &mut trace);
    log::debug!(
        "reduced {} -> {} vertices, offset {}",
        g.alive_count(),
        kernel.alive_count(),
        trace.offset()
    );
    KernelResult { offset: trace.offset(), kernel, trace, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsolve::{mwis_of_graph, SubsolveBudget};

    fn path(weights: &[Weight]) -> WeightedGraph {
        let edges: Vec<_> = (1..weights.len()).map(|i| (i - 1, i)).collect();
        WeightedGraph::from_edges(weights.len(), &edges, weights.to_vec()).unwrap()
    }

    fn only(steps: &[Step]) -> ReducePipeline {
        ReducePipeline::new(steps.to_vec(), CitBudget::default())
    }

    fn run_step(g: &mut WeightedGraph, step: Step) -> (ReductionTrace, bool) {
        let mut t = ReductionTrace::new();
        let changed = apply_step(step, g, &mut t, &CitBudget::default()).is_some();
        (t, changed)
    }

    #[test]
    fn step_names_round_trip() {
        for s in Step::ALL {
            assert_eq!(s.name().parse::<Step>(), Ok(s));
        }
        assert!("bogus".parse::<Step>().is_err());
    }

    #[test]
    fn isolated_is_taken() {
        let g = WeightedGraph::with_weights(vec![5]).unwrap();
        let r = reduce_with(&g, &only(&[Step::Isolated]));
        assert_eq!(r.offset, 5);
        assert!(r.kernel.is_empty());
    }

    #[test]
    fn heavy_star_center_is_taken() {
        let g = WeightedGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)], vec![10, 1, 2, 3]).unwrap();
        let mut k = g.clone();
        let (t, changed) = run_step(&mut k, Step::Neighborhood);
        assert!(changed);
        assert_eq!(t.offset(), 10);
        assert_eq!(mwis_of_graph(&g, &SubsolveBudget::default()).unwrap().0, 10);
    }

    #[test]
    fn pendant_fold_both_cases() {
        // the fold result has to match brute force whichever way the kernel goes
        for anchor_rest in [1, 9] {
            let g = WeightedGraph::from_edges(3, &[(0, 1), (1, 2)], vec![2, 5, anchor_rest]).unwrap();
            let mut k = g.clone();
            let (t, changed) = run_step(&mut k, Step::Pendant);
            assert!(changed);
            assert_eq!(t.offset(), 2);
            assert_eq!(k.weight(VertexId::new(1)), 3);
            let (kw, ks) = mwis_of_graph(&k, &SubsolveBudget::default()).unwrap();
            let full = t.reconstruct(&k, &ks).unwrap();
            let best = mwis_of_graph(&g, &SubsolveBudget::default()).unwrap().0;
            assert_eq!(kw + t.offset(), best);
            assert_eq!(g.weight_of(&full), best);
            assert!(g.is_independent(&full));
        }
    }

    #[test]
    fn domination_deletes_lighter_dominator() {
        // triangle 0-1-2 plus 0-3: N[1] = {0,1,2} ⊆ N[0], w(0) ≤ w(1)
        let g = WeightedGraph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (0, 3)], vec![2, 3, 1, 4]).unwrap();
        let mut k = g.clone();
        let (t, changed) = run_step(&mut k, Step::Domination);
        assert!(changed);
        assert_eq!(t.events()[0], crate::graph::ReductionEvent::ExcludeVertex { vertex: VertexId::new(0) });
    }

    #[test]
    fn confining_step_on_p3_and_p4() {
        let mut g = path(&[1, 3, 1]);
        let (t, changed) = run_step(&mut g, Step::Confining);
        assert!(changed);
        assert_eq!(t.events()[0], crate::graph::ReductionEvent::ExcludeVertex { vertex: VertexId::new(0) });

        let mut g = path(&[2, 3, 2, 1]);
        let (t, _) = run_step(&mut g, Step::Confining);
        assert_eq!(
            t.events()[0],
            crate::graph::ReductionEvent::ContractSet {
                members: vec![VertexId::new(0), VertexId::new(2)],
                merged: VertexId::new(4)
            }
        );
        let mut g = WeightedGraph::with_weights(vec![]).unwrap();
        assert!(!run_step(&mut g, Step::Confining).1);
    }

    #[test]
    fn covering_step_examples() {
        let mut g = path(&[1, 2, 2]);
        let (t, _) = run_step(&mut g, Step::Covering);
        assert!(matches!(t.events()[0], crate::graph::ReductionEvent::IncludeVertex { vertex, .. } if vertex == VertexId::new(0)));

        let mut g = path(&[1, 3, 2]);
        let (t, _) = run_step(&mut g, Step::Covering);
        assert!(matches!(&t.events()[0], crate::graph::ReductionEvent::ContractSet { members, .. }
            if members == &vec![VertexId::new(0), VertexId::new(2)]));
        assert_eq!(g.weight(VertexId::new(3)), 3);
    }

    #[test]
    fn full_pipeline_examples() {
        let r = causal_reduce(&path(&[2, 3, 2, 1]));
        assert!(r.kernel.is_empty());
        assert_eq!(r.offset, 4);
        let r = causal_reduce(&path(&[1, 3, 1]));
        assert!(r.kernel.is_empty());
        assert_eq!(r.offset, 3);
        let r = causal_reduce(&WeightedGraph::with_weights(vec![]).unwrap());
        assert_eq!(r.offset, 0);
    }

    #[test]
    fn disabled_steps_are_skipped() {
        let p = ReducePipeline::default().without(&[Step::Confining, Step::Covering]);
        assert_eq!(p.steps(), &Step::BASIC);
        // C5 with equal weights is irreducible for the basic rules
        let edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let g = WeightedGraph::from_edges(5, &edges, vec![3; 5]).unwrap();
        let r = reduce_with(&g, &p);
        assert_eq!(r.kernel.alive_count(), 5);
        assert_eq!(r.stats.per_rule.len(), 4);
    }
}
